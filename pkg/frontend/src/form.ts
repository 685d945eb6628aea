/** The seven-class verdict form.
 *
 * Owns its DOM subtree and enforces the two client-side invariants: the
 * reasoning textarea is editable only while class 7 is toggled on, and
 * the submit control stays disabled while class 7 is on with blank
 * reasoning. Clearing is explicit; the app calls clear() only after the
 * server acknowledged the verdict.
 */

import { EVAL_CLASSES, NUM_CLASSES, tooltip } from "./classes.js";

export interface FormState {
  decisions: boolean[];
  reasoning: string;
  comment: string;
}

export class VerdictForm {
  readonly element: HTMLFormElement;
  private readonly checkboxes: HTMLInputElement[] = [];
  private readonly reasoning: HTMLTextAreaElement;
  private readonly comment: HTMLTextAreaElement;
  private readonly submitButton: HTMLButtonElement;
  private readonly reasoningError: HTMLElement;
  private busy = false;

  constructor(doc: Document, onSubmit: (state: FormState) => void) {
    this.element = doc.createElement("form");
    this.element.className = "verdict-form";
    this.element.noValidate = true;

    const fieldset = doc.createElement("fieldset");
    fieldset.className = "classes";
    const legend = doc.createElement("legend");
    legend.textContent = "Bewertung";
    fieldset.append(legend);
    for (const def of EVAL_CLASSES) {
      const label = doc.createElement("label");
      label.className = "class-toggle";
      label.title = tooltip(def);
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.dataset.classIndex = String(def.index);
      box.addEventListener("change", () => this.refresh());
      const key = doc.createElement("kbd");
      key.textContent = String(def.index);
      const text = doc.createElement("span");
      text.textContent = def.label;
      label.append(box, key, text);
      fieldset.append(label);
      this.checkboxes.push(box);
    }

    const reasoningField = doc.createElement("div");
    reasoningField.className = "field reasoning-field";
    const reasoningLabel = doc.createElement("label");
    reasoningLabel.textContent = "Begründung (erforderlich bei Überlegenheit)";
    this.reasoning = doc.createElement("textarea");
    this.reasoning.className = "reasoning";
    this.reasoning.rows = 3;
    this.reasoning.addEventListener("input", () => {
      this.clearReasoningError();
      this.refresh();
    });
    this.reasoningError = doc.createElement("p");
    this.reasoningError.className = "field-error";
    this.reasoningError.hidden = true;
    reasoningLabel.append(this.reasoning);
    reasoningField.append(reasoningLabel, this.reasoningError);

    const commentField = doc.createElement("div");
    commentField.className = "field comment-field";
    const commentLabel = doc.createElement("label");
    commentLabel.textContent = "Anmerkung (optional)";
    this.comment = doc.createElement("textarea");
    this.comment.className = "comment";
    this.comment.rows = 2;
    commentLabel.append(this.comment);
    commentField.append(commentLabel);

    this.submitButton = doc.createElement("button");
    this.submitButton.type = "submit";
    this.submitButton.className = "submit";
    this.submitButton.textContent = "Absenden";

    this.element.append(fieldset, reasoningField, commentField, this.submitButton);
    this.element.addEventListener("submit", (event) => {
      event.preventDefault();
      if (!this.canSubmit()) return;
      onSubmit(this.state());
    });
    this.refresh();
  }

  state(): FormState {
    return {
      decisions: this.checkboxes.map((box) => box.checked),
      reasoning: this.reasoning.value,
      comment: this.comment.value,
    };
  }

  /** Flip class `index` (1-based), as the number keys do. */
  toggle(index: number): void {
    if (index < 1 || index > NUM_CLASSES) return;
    const box = this.checkboxes[index - 1];
    if (!box) return;
    box.checked = !box.checked;
    this.clearReasoningError();
    this.refresh();
  }

  canSubmit(): boolean {
    if (this.busy) return false;
    const state = this.state();
    if (state.decisions[NUM_CLASSES - 1] && state.reasoning.trim() === "") return false;
    return true;
  }

  setBusy(busy: boolean): void {
    this.busy = busy;
    this.refresh();
  }

  clear(): void {
    for (const box of this.checkboxes) box.checked = false;
    this.reasoning.value = "";
    this.comment.value = "";
    this.clearReasoningError();
    this.refresh();
  }

  showReasoningError(message: string): void {
    this.reasoningError.textContent = message;
    this.reasoningError.hidden = false;
    this.reasoning.setAttribute("aria-invalid", "true");
  }

  clearReasoningError(): void {
    this.reasoningError.textContent = "";
    this.reasoningError.hidden = true;
    this.reasoning.removeAttribute("aria-invalid");
  }

  private refresh(): void {
    const superiority = this.checkboxes[NUM_CLASSES - 1]?.checked ?? false;
    this.reasoning.disabled = !superiority;
    this.submitButton.disabled = !this.canSubmit();
  }
}
