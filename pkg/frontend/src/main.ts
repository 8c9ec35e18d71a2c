import { ApiClient } from "./api.js";
import { bootstrap } from "./app.js";

const root = document.getElementById("app");
if (root) {
  // point at another origin with <div id="app" data-api-base="http://host:port">
  const base = root.dataset.apiBase ?? "";
  void bootstrap(root, new ApiClient(base));
}
