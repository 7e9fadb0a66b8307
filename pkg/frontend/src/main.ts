import { ApiClient } from "./api";
import { createApp } from "./app";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  try {
    await createApp(root, new ApiClient(""));
  } catch (err) {
    const banner = document.createElement("p");
    banner.className = "error-banner";
    banner.textContent = `could not start: ${err instanceof Error ? err.message : err}`;
    root.append(banner);
  }
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", () => void boot());
} else {
  void boot();
}
