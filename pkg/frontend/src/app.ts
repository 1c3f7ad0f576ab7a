/**
 * DOM assembly: builds the whole playground UI inside a container element
 * and wires it to a view model. Kept separate from main.ts so tests can
 * mount the exact production UI under jsdom against a live gateway.
 */

import { GatewayClient } from "./api.js";
import { renderScene } from "./render.js";
import { FINGER_KINDS, FingerKind, PlaygroundViewModel } from "./viewmodel.js";

export interface App {
  vm: PlaygroundViewModel;
  refresh: () => void;
  elements: {
    sceneInput: HTMLTextAreaElement;
    loadButton: HTMLButtonElement;
    banner: HTMLDivElement;
    ringButton: HTMLButtonElement;
    pressButton: HTMLButtonElement;
    utterance: HTMLInputElement;
    phaseLabel: HTMLSpanElement;
    prevButton: HTMLButtonElement;
    nextButton: HTMLButtonElement;
    pageLabel: HTMLSpanElement;
    candidateList: HTMLOListElement;
    retryButton: HTMLButtonElement;
    btXml: HTMLPreElement;
    canvas: HTMLCanvasElement;
    studyToggle: HTMLInputElement;
    fingerToggles: Record<FingerKind, HTMLInputElement>;
  };
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

export function mountApp(container: HTMLElement, baseUrl = ""): App {
  const api = new GatewayClient(baseUrl);
  const vm = new PlaygroundViewModel(api, { onStateChange: () => refresh() });

  const banner = el("div", { id: "banner", class: "banner", hidden: "hidden" });
  const canvas = el("canvas", { id: "view", width: "840", height: "520" });
  const sceneInput = el("textarea", { id: "scene-input", rows: "4", placeholder: "paste a scene document" });
  const resolverSelect = el("select", { id: "resolver" });
  for (const mode of ["", "mock", "baseline", "remote"]) {
    resolverSelect.append(el("option", { value: mode }, mode || "(server default)"));
  }
  const loadButton = el("button", { id: "load-scene" }, "Load scene");
  const ringButton = el("button", { id: "ring", disabled: "disabled" }, "Hold ring");
  const pressButton = el("button", { id: "press", disabled: "disabled" }, "Press");
  const utterance = el("input", { id: "utterance", placeholder: "utterance (empty = non-voice)" });
  const phaseLabel = el("span", { id: "phase" }, "idle");
  const prevButton = el("button", { id: "prev" }, "Prev");
  const nextButton = el("button", { id: "next" }, "Next");
  const pageLabel = el("span", { id: "page" }, "page 1/3");
  const candidateList = el("ol", { id: "candidates" });
  const retryButton = el("button", { id: "retry", disabled: "disabled" }, "Retry");
  const btXml = el("pre", { id: "bt-xml" });
  const studyToggle = el("input", { id: "study-mode", type: "checkbox" });

  const fingerToggles = {} as Record<FingerKind, HTMLInputElement>;
  const fingerBar = el("div", { class: "fingers" });
  for (const kind of FINGER_KINDS) {
    const box = el("input", { id: `finger-${kind}`, type: "checkbox" });
    fingerToggles[kind] = box;
    const label = el("label", {}, ` ${kind} `);
    label.prepend(box);
    fingerBar.append(label);
  }

  const controls = el("div", { class: "controls" });
  controls.append(
    sceneInput,
    resolverSelect,
    loadButton,
    banner,
    el("div", {}, "ring: "),
    ringButton,
    pressButton,
    utterance,
    el("div", {}, "phase: "),
    phaseLabel,
    fingerBar,
    studyToggle,
  );
  const panel = el("div", { class: "panel" });
  panel.append(prevButton, pageLabel, nextButton, candidateList, retryButton, btXml);
  container.append(canvas, controls, panel);

  // --- interactions -----------------------------------------------------------

  loadButton.addEventListener("click", () => {
    void vm.loadSceneDocument(sceneInput.value, resolverSelect.value);
  });

  // Hold-to-touch: press and hold the ring button, click Press while held,
  // release to dispatch.
  ringButton.addEventListener("mousedown", () => void vm.holdStart());
  ringButton.addEventListener("mouseup", () => void vm.release());
  pressButton.addEventListener("click", () => void vm.press());

  utterance.addEventListener("input", () => {
    vm.utterance = utterance.value;
  });

  prevButton.addEventListener("click", () => void vm.prevPage());
  nextButton.addEventListener("click", () => void vm.nextPage());
  retryButton.addEventListener("click", () => void vm.retry());
  studyToggle.addEventListener("change", () => {
    vm.studyMode = studyToggle.checked;
    refresh();
  });
  for (const kind of FINGER_KINDS) {
    fingerToggles[kind].addEventListener("change", () => {
      vm.fingers[kind].enabled = fingerToggles[kind].checked;
      refresh();
    });
  }

  // Camera: drag to orbit, arrows/WASD to walk.
  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener("mousedown", (e) => {
    dragging = true;
    lastX = e.clientX;
    lastY = e.clientY;
  });
  canvas.addEventListener("mouseup", () => (dragging = false));
  canvas.addEventListener("mousemove", (e) => {
    if (!dragging) return;
    vm.camera.yawDeg -= (e.clientX - lastX) * 0.25;
    vm.camera.pitchDeg = Math.max(-80, Math.min(80, vm.camera.pitchDeg - (e.clientY - lastY) * 0.25));
    lastX = e.clientX;
    lastY = e.clientY;
    refresh();
  });
  document.addEventListener("keydown", (e) => {
    const step = 0.3;
    const yaw = (vm.camera.yawDeg * Math.PI) / 180;
    if (e.key === "w" || e.key === "ArrowUp") {
      vm.camera.position.x += Math.cos(yaw) * step;
      vm.camera.position.y += Math.sin(yaw) * step;
    } else if (e.key === "s" || e.key === "ArrowDown") {
      vm.camera.position.x -= Math.cos(yaw) * step;
      vm.camera.position.y -= Math.sin(yaw) * step;
    } else if (e.key === "a") {
      vm.camera.yawDeg += 3;
    } else if (e.key === "d") {
      vm.camera.yawDeg -= 3;
    } else {
      return;
    }
    refresh();
  });

  // --- view sync ----------------------------------------------------------------

  function refresh(): void {
    banner.hidden = vm.banner === null;
    banner.textContent = vm.banner ?? "";
    phaseLabel.textContent = vm.phase;
    ringButton.disabled = !(vm.ring.phase === "recording" || vm.canHold);
    ringButton.textContent = vm.ring.phase === "recording" ? "Release ring" : "Hold ring";
    pressButton.disabled = !vm.canPress;
    retryButton.disabled = !vm.canRetry;
    retryButton.textContent = vm.retriesExhausted ? "retries exhausted" : "Retry";
    pageLabel.textContent = `page ${vm.pageIndex + 1}/3`;

    candidateList.replaceChildren();
    const page = vm.currentPage();
    if (page) {
      for (const cand of page.candidates) {
        const item = el("li", { class: "candidate", "data-rank": String(cand.rank) });
        item.append(el("div", { class: "display" }, `${cand.rank}. ${cand.display_text}`));
        item.append(el("div", { class: "explanation" }, cand.explanation));
        const confirmButton = el("button", { class: "confirm" }, "Confirm");
        confirmButton.addEventListener("click", () => void vm.confirm(cand.rank));
        item.append(confirmButton);
        candidateList.append(item);
      }
    }
    btXml.textContent = vm.btXml ?? "";
    renderScene(canvas, vm);
  }

  refresh();
  return {
    vm,
    refresh,
    elements: {
      sceneInput,
      loadButton,
      banner,
      ringButton,
      pressButton,
      utterance,
      phaseLabel,
      prevButton,
      nextButton,
      pageLabel,
      candidateList,
      retryButton,
      btXml,
      canvas,
      studyToggle,
      fingerToggles,
    },
  };
}
