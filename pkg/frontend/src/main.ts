import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const app = createApp(root);
  const scanId = new URLSearchParams(window.location.search).get("scan");
  if (scanId) {
    void app.loadScan(scanId);
  } else {
    root.insertAdjacentHTML(
      "afterbegin",
      '<p class="empty-state">pass ?scan=&lt;scan id&gt; in the URL to load a scan</p>',
    );
  }
}
