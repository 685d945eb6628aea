/** Screen flow for the blinded review UI.
 *
 * Three screens: token login, the review screen (reference and candidate
 * side by side, collapsible judgment excerpt, verdict form, progress
 * line), and the queue-done screen. All server interaction goes through
 * a ReviewClient; nothing is marked submitted before the server
 * acknowledges it, and a failed request leaves the form untouched so the
 * reviewer can retry.
 */

import { ApiError, isQueueItem, type QueueItem, type ReviewClient, type SessionInfo, type VerdictPayload } from "./api.js";
import { NUM_CLASSES } from "./classes.js";
import { VerdictForm, type FormState } from "./form.js";

export interface AppOptions {
  /** Clock override for tests; defaults to the wall clock. */
  now?: () => Date;
}

const MSG_EXPIRED = "Sitzung abgelaufen, bitte erneut anmelden.";
const MSG_UNREACHABLE = "Server nicht erreichbar.";
const MSG_SUBMIT_FAILED = "Senden fehlgeschlagen, die Eingaben bleiben erhalten.";

export class App {
  private readonly root: HTMLElement;
  private readonly doc: Document;
  private readonly api: ReviewClient;
  private readonly now: () => Date;

  private session: SessionInfo | null = null;
  private form: VerdictForm | null = null;
  private currentItem: QueueItem | null = null;
  private inFlight = false;

  private counts = { done: 0, remaining: 0 };
  private lastSync: Date | null = null;

  private progressCount: HTMLElement | null = null;
  private staleBadge: HTMLElement | null = null;
  private banner: HTMLElement | null = null;
  private itemArea: HTMLElement | null = null;

  constructor(root: HTMLElement, api: ReviewClient, options: AppOptions = {}) {
    this.root = root;
    this.doc = root.ownerDocument;
    this.api = api;
    this.now = options.now ?? (() => new Date());
    this.doc.addEventListener("keydown", (event) => this.onKey(event));
  }

  start(): void {
    this.renderLogin();
  }

  /** Re-sync the progress line; safe to call from a timer. */
  async refreshProgress(): Promise<void> {
    if (!this.session) return;
    try {
      this.counts = await this.api.progress(this.session.session_token);
      this.lastSync = this.now();
      this.updateProgress();
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.sessionExpired();
        return;
      }
      this.markStale();
    }
  }

  private renderLogin(notice?: string): void {
    this.session = null;
    this.form = null;
    this.currentItem = null;
    this.progressCount = null;
    this.staleBadge = null;
    this.banner = null;
    this.itemArea = null;

    this.root.textContent = "";
    const screen = this.el("section", "screen login-screen");
    screen.append(this.heading());
    if (notice) {
      const p = this.el("p", "notice");
      p.textContent = notice;
      screen.append(p);
    }
    const form = this.doc.createElement("form");
    form.className = "login-form";
    const label = this.doc.createElement("label");
    label.textContent = "Zugangsschlüssel";
    const input = this.doc.createElement("input");
    input.type = "password";
    input.className = "token";
    input.autocomplete = "off";
    label.append(input);
    const button = this.doc.createElement("button");
    button.type = "submit";
    button.textContent = "Anmelden";
    const error = this.el("p", "login-error");
    error.hidden = true;
    form.append(label, button, error);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.handleLogin(input.value, error);
    });
    screen.append(form);
    this.root.append(screen);
  }

  private async handleLogin(token: string, errorSlot: HTMLElement): Promise<void> {
    errorSlot.hidden = true;
    try {
      this.session = await this.api.login(token);
    } catch (error) {
      errorSlot.textContent = error instanceof ApiError ? error.message : MSG_UNREACHABLE;
      errorSlot.hidden = false;
      return;
    }
    this.counts = { done: this.session.done, remaining: this.session.remaining };
    this.lastSync = this.now();
    this.renderReview();
    await this.loadNext();
  }

  private renderReview(): void {
    if (!this.session) return;
    this.root.textContent = "";
    const screen = this.el("section", "screen review-screen");

    const header = this.doc.createElement("header");
    header.append(this.heading());
    const reviewer = this.el("p", "reviewer");
    reviewer.textContent = `Angemeldet als ${this.session.reviewer_id}`;
    const progress = this.el("p", "progress");
    this.progressCount = this.el("span", "progress-count");
    this.staleBadge = this.el("span", "stale-badge");
    this.staleBadge.hidden = true;
    progress.append(this.progressCount, " ", this.staleBadge);
    header.append(reviewer, progress);

    this.banner = this.el("div", "banner");
    this.banner.hidden = true;
    this.itemArea = this.el("main", "item-area");

    screen.append(header, this.banner, this.itemArea);
    this.root.append(screen);
    this.updateProgress();
  }

  private async loadNext(): Promise<void> {
    if (!this.session) return;
    this.hideBanner();
    let next;
    try {
      next = await this.api.next(this.session.session_token);
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.sessionExpired();
        return;
      }
      const message = error instanceof ApiError ? error.message : MSG_UNREACHABLE;
      this.markStale();
      this.showBanner(message, "Erneut laden", () => void this.loadNext());
      return;
    }
    if (isQueueItem(next)) {
      this.renderItem(next);
    } else {
      this.renderDone();
    }
  }

  private renderItem(item: QueueItem): void {
    if (!this.itemArea) return;
    this.currentItem = item;
    this.itemArea.textContent = "";

    const position = this.el("p", "position");
    position.textContent = `Eintrag ${item.position[0]} von ${item.position[1]}`;

    const texts = this.el("div", "texts");
    texts.append(
      this.pane("reference", "Referenz", item.gold_text),
      this.pane("candidate", "Kandidat", item.candidate_text),
    );

    this.itemArea.append(position, texts);

    if (item.judgment_excerpt !== null) {
      const details = this.doc.createElement("details");
      details.className = "excerpt";
      const summary = this.doc.createElement("summary");
      summary.textContent = "Auszug aus den Entscheidungsgründen";
      const body = this.el("p", "excerpt-text");
      body.textContent = item.judgment_excerpt;
      details.append(summary, body);
      this.itemArea.append(details);
    }

    this.form = new VerdictForm(this.doc, (state) => void this.handleSubmit(state));
    this.itemArea.append(this.form.element);
  }

  private renderDone(): void {
    if (!this.itemArea) return;
    this.currentItem = null;
    this.form = null;
    this.itemArea.textContent = "";
    const done = this.el("section", "queue-done");
    const h2 = this.doc.createElement("h2");
    h2.textContent = "Warteschlange abgeschlossen";
    const p = this.el("p", "done-note");
    p.textContent = `Alle ${this.counts.done} Einträge sind bearbeitet. Vielen Dank.`;
    done.append(h2, p);
    this.itemArea.append(done);
  }

  private async handleSubmit(state: FormState): Promise<void> {
    if (!this.session || !this.currentItem || !this.form) return;
    if (this.inFlight) return;
    const payload: VerdictPayload = {
      item_id: this.currentItem.item_id,
      decisions: state.decisions.slice(0, NUM_CLASSES),
      reasoning: state.reasoning,
      comment: state.comment,
    };
    this.inFlight = true;
    this.form.setBusy(true);
    this.hideBanner();
    try {
      const result = await this.api.submit(this.session.session_token, payload);
      this.counts = { done: result.done, remaining: result.remaining };
      this.lastSync = this.now();
      this.updateProgress();
      this.form.clear();
      await this.loadNext();
    } catch (error) {
      if (error instanceof ApiError) {
        if (error.status === 401) {
          this.sessionExpired();
          return;
        }
        if (error.status === 409) {
          this.form.clear();
          await this.refreshProgress();
          await this.loadNext();
          return;
        }
        if (error.status === 422) {
          this.form.showReasoningError(error.message);
          return;
        }
        this.showBanner(error.message, "Erneut senden", () => this.submitFromForm());
        return;
      }
      this.markStale();
      this.showBanner(MSG_SUBMIT_FAILED, "Erneut senden", () => this.submitFromForm());
    } finally {
      this.inFlight = false;
      this.form?.setBusy(false);
    }
  }

  private submitFromForm(): void {
    if (!this.form || !this.form.canSubmit()) return;
    void this.handleSubmit(this.form.state());
  }

  private onKey(event: KeyboardEvent): void {
    if (!this.root.isConnected) return;
    if (!this.form || !this.currentItem) return;
    const target = event.target as HTMLElement | null;
    const tag = target?.tagName?.toLowerCase() ?? "";
    if (tag === "textarea") return;
    if (tag === "input" && (target as HTMLInputElement).type !== "checkbox") return;
    if (event.key >= "1" && event.key <= "7") {
      event.preventDefault();
      this.form.toggle(Number(event.key));
    } else if (event.key === "Enter") {
      event.preventDefault();
      this.submitFromForm();
    }
  }

  private sessionExpired(): void {
    this.renderLogin(MSG_EXPIRED);
  }

  private updateProgress(): void {
    if (!this.progressCount || !this.staleBadge) return;
    const total = this.counts.done + this.counts.remaining;
    this.progressCount.textContent = `${this.counts.done} / ${total}`;
    this.staleBadge.hidden = true;
    this.staleBadge.textContent = "";
  }

  private markStale(): void {
    if (!this.staleBadge) return;
    const when = this.lastSync ? formatTime(this.lastSync) : "unbekannt";
    this.staleBadge.textContent = `nicht erreichbar, Stand: ${when}`;
    this.staleBadge.hidden = false;
  }

  private showBanner(message: string, retryLabel: string, retry: () => void): void {
    if (!this.banner) return;
    this.banner.textContent = "";
    const text = this.el("span", "banner-text");
    text.textContent = message;
    const button = this.doc.createElement("button");
    button.type = "button";
    button.className = "retry";
    button.textContent = retryLabel;
    button.addEventListener("click", () => retry());
    this.banner.append(text, " ", button);
    this.banner.hidden = false;
  }

  private hideBanner(): void {
    if (!this.banner) return;
    this.banner.hidden = true;
    this.banner.textContent = "";
  }

  private heading(): HTMLElement {
    const h1 = this.doc.createElement("h1");
    h1.textContent = "Leitsatz-Begutachtung";
    return h1;
  }

  private pane(kind: string, title: string, text: string): HTMLElement {
    const pane = this.el("article", `pane ${kind}`);
    const h2 = this.doc.createElement("h2");
    h2.textContent = title;
    const body = this.el("p", "text");
    body.textContent = text;
    pane.append(h2, body);
    return pane;
  }

  private el(tag: string, className: string): HTMLElement {
    const node = this.doc.createElement(tag);
    node.className = className;
    return node;
  }
}

function formatTime(date: Date): string {
  const pad = (n: number) => String(n).padStart(2, "0");
  return `${pad(date.getHours())}:${pad(date.getMinutes())}`;
}
