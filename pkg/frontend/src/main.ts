/**
 * Bootstrap: wire the API client, controller, renderer and key bindings.
 */

import { ReviewApi } from "./api.js";
import { render } from "./render.js";
import { ReviewController } from "./state.js";

function reviewerName(): string {
  const stored = window.localStorage.getItem("casesift-reviewer");
  if (stored) {
    return stored;
  }
  const entered = window.prompt("Reviewer name for the label audit trail:", "") ?? "";
  const name = entered.trim() || "anonymous";
  window.localStorage.setItem("casesift-reviewer", name);
  return name;
}

export function bootstrap(root: HTMLElement, api?: ReviewApi, reviewer?: string): ReviewController {
  const controller = new ReviewController(
    api ?? new ReviewApi(""),
    reviewer ?? reviewerName(),
  );

  controller.subscribe((state) => render(root, state));

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement | null;
    const action = target?.closest<HTMLElement>("[data-action]")?.dataset.action;
    if (action === "label-sj") {
      void controller.submit("sj");
    } else if (action === "label-non-sj") {
      void controller.submit("non-sj");
    } else if (action === "retry") {
      void controller.retry();
    }
  });

  window.addEventListener("keydown", (event) => {
    if (event.repeat || event.metaKey || event.ctrlKey || event.altKey) {
      return;
    }
    const key = event.key.toLowerCase();
    if (key === "y") {
      void controller.submit("sj");
    } else if (key === "n") {
      void controller.submit("non-sj");
    }
  });

  void controller.start();
  return controller;
}

const mount = document.getElementById("app");
if (mount) {
  bootstrap(mount);
}
