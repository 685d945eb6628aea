/** Scripted fake client plus DOM utilities shared by the UI tests. */

import {
  ApiError,
  type Progress,
  type QueueItem,
  type QueueNext,
  type ReviewClient,
  type SessionInfo,
  type SubmitResult,
  type VerdictPayload,
} from "../src/api.js";
import { App, type AppOptions } from "../src/app.js";

export const SESSION: SessionInfo = {
  session_token: "sess-1",
  reviewer_id: "r1",
  done: 0,
  remaining: 2,
};

type Result<T> = { ok: T } | { err: Error };

export function ok<T>(value: T): Result<T> {
  return { ok: value };
}

export function err<T>(error: Error): Result<T> {
  return { err: error };
}

export function apiError(status: number, code: string, message: string): ApiError {
  return new ApiError(status, code, message);
}

export function networkError(): TypeError {
  return new TypeError("fetch failed");
}

/** Consume a scripted response list; the last entry is sticky. */
function take<T>(list: Array<Result<T>>, what: string): T {
  if (list.length === 0) throw new Error(`FakeApi: no scripted ${what} response`);
  const result = list.length > 1 ? list.shift()! : list[0]!;
  if ("err" in result) throw result.err;
  return result.ok;
}

export class FakeApi implements ReviewClient {
  loginResponses: Array<Result<SessionInfo>> = [ok(SESSION)];
  nextResponses: Array<Result<QueueNext>> = [];
  submitResponses: Array<Result<SubmitResult>> = [];
  progressResponses: Array<Result<Progress>> = [];
  /** When set, overrides submitResponses; lets a test hold the ack. */
  submitHandler: ((payload: VerdictPayload) => Promise<SubmitResult>) | null = null;

  readonly loginTokens: string[] = [];
  readonly submitPayloads: VerdictPayload[] = [];
  nextCalls = 0;
  progressCalls = 0;

  async login(token: string): Promise<SessionInfo> {
    this.loginTokens.push(token);
    return take(this.loginResponses, "login");
  }

  async next(_session: string): Promise<QueueNext> {
    this.nextCalls += 1;
    return take(this.nextResponses, "next");
  }

  async submit(_session: string, payload: VerdictPayload): Promise<SubmitResult> {
    this.submitPayloads.push(payload);
    if (this.submitHandler) return this.submitHandler(payload);
    return take(this.submitResponses, "submit");
  }

  async progress(_session: string): Promise<Progress> {
    this.progressCalls += 1;
    return take(this.progressResponses, "progress");
  }
}

export function makeItem(n: number, total: number, overrides: Partial<QueueItem> = {}): QueueItem {
  return {
    item_id: `item-${n}`,
    gold_text: `Referenztext ${n}: Die Schriftform des § 766 Satz 1 BGB ist nicht gewahrt.`,
    candidate_text: `Kandidatentext ${n}: Eine einfache E-Mail genügt der Form nicht.`,
    judgment_excerpt: `Auszug ${n}: Nach § 125 BGB ist das Rechtsgeschäft nichtig.`,
    position: [n, total],
    ...overrides,
  };
}

export interface Mounted {
  app: App;
  root: HTMLElement;
  api: FakeApi;
}

export function mount(api: FakeApi, options: AppOptions = {}): Mounted {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  const app = new App(root, api, options);
  app.start();
  return { app, root, api };
}

/** Flush queued microtasks and one macrotask turn. */
export async function tick(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

export function q<T extends Element>(scope: ParentNode, selector: string): T {
  const node = scope.querySelector(selector);
  if (!node) throw new Error(`missing element: ${selector}`);
  return node as T;
}

export function submitForm(scope: ParentNode, selector: string): void {
  const form = q<HTMLFormElement>(scope, selector);
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}

export async function login(m: Mounted, token = "tok-r1"): Promise<void> {
  const input = q<HTMLInputElement>(m.root, "input.token");
  input.value = token;
  submitForm(m.root, "form.login-form");
  await tick();
}

export function setValue(el: HTMLInputElement | HTMLTextAreaElement, value: string): void {
  el.value = value;
  el.dispatchEvent(new Event("input", { bubbles: true }));
}

export function checkbox(scope: ParentNode, index: number): HTMLInputElement {
  return q<HTMLInputElement>(scope, `input[data-class-index="${index}"]`);
}

export function toggleBox(scope: ParentNode, index: number): void {
  const box = checkbox(scope, index);
  box.checked = !box.checked;
  box.dispatchEvent(new Event("change", { bubbles: true }));
}

export function pressKey(target: EventTarget, key: string): void {
  target.dispatchEvent(new KeyboardEvent("keydown", { key, bubbles: true }));
}

export function deferred<T>(): {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (error: unknown) => void;
} {
  let resolve!: (value: T) => void;
  let reject!: (error: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}
