// Browser entry point: wire the app to the page.

import { DialogueApp } from "./app.js";
import { renderState } from "./render.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

async function boot(): Promise<void> {
  const svg = document.querySelector<SVGSVGElement>("#map")!;
  const transcript = document.querySelector<HTMLElement>("#transcript")!;
  const input = document.querySelector<HTMLInputElement>("#user-input")!;
  const form = document.querySelector<HTMLFormElement>("#input-form")!;

  const app = new DialogueApp({
    baseUrl: param("api", "http://127.0.0.1:8140"),
    scenario: param("scenario", "three-trains"),
    seed: Number(param("seed", "0")),
    onChange: (view) => renderState(view, { svg, transcript, input }),
  });
  await app.start();

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const text = input.value;
    void app.submitTurn(text).then((sent) => {
      if (sent) input.value = "";
      input.focus();
    });
  });
}

void boot();
