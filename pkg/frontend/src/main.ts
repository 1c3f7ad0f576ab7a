import { mountApp } from "./app.js";

const container = document.getElementById("app");
if (container) {
  mountApp(container, "");
}
