/** Browser entry point: wire the app to the backend origin.
 *
 * The API origin defaults to the page's own origin; a deployment that
 * serves the static files elsewhere can set <html data-api="https://…">
 * (cross-origin setups must handle CORS in front of the backend).
 */

import { ReviewApi } from "./api.js";
import { App } from "./app.js";

const PROGRESS_POLL_MS = 30_000;

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}

const base = document.documentElement.dataset.api ?? "";
const app = new App(root, new ReviewApi(base));
app.start();
setInterval(() => void app.refreshProgress(), PROGRESS_POLL_MS);
