import { ApiClient } from "./api.js";
import { Console } from "./console.js";

const root = document.getElementById("app");
if (root) {
  const app = new Console(root, new ApiClient());
  void app.init();
}
