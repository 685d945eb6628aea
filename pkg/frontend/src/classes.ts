/** The seven binary evaluation classes, in submission order. */

export interface EvalClassDef {
  /** 1-based class index; position index-1 in the decisions array. */
  readonly index: number;
  /** German label shown to reviewers. */
  readonly label: string;
  /** English aspect name, shown as part of the tooltip. */
  readonly aspect: string;
  /** Short description, shown as part of the tooltip. */
  readonly hint: string;
}

export const NUM_CLASSES = 7;

export const EVAL_CLASSES: readonly EvalClassDef[] = [
  { index: 1, label: "Verständlichkeit", aspect: "Intelligibility", hint: "intelligible result" },
  { index: 2, label: "Sprache", aspect: "Language", hint: "correct use of German language" },
  { index: 3, label: "Prägnanz", aspect: "Pertinence", hint: "only necessary information" },
  { index: 4, label: "Vollständigkeit", aspect: "Completeness", hint: "inclusion of every aspect" },
  { index: 5, label: "Kernaussage", aspect: "Main Focus", hint: "the essential point is captured" },
  { index: 6, label: "Richtigkeit", aspect: "Correctness", hint: "no error in legal reasoning" },
  { index: 7, label: "Überlegenheit", aspect: "Superiority", hint: "superior to the reference" },
];

export function tooltip(def: EvalClassDef): string {
  return `${def.aspect}: ${def.hint}`;
}
