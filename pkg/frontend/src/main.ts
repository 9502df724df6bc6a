import { SessionApi } from "./api";
import { SessionController } from "./controller";
import { renderEnabled, renderEther, renderNotice, renderProcesses, renderTrace } from "./render";
import { TraceEntry } from "./types";

const api = new SessionApi("");
const controller = new SessionController(api);

const $ = (id: string) => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

const traceLog: TraceEntry[] = [];

function redraw(): void {
  if (!controller.state) return;
  renderProcesses($("processes"), controller.state.node, controller.lastDiff);
  renderEther($("ether"), controller.state.node, controller.lastDiff);
  renderEnabled($("enabled"), controller.enabled, (index) => {
    void pick(index);
  });
  renderTrace($("trace"), traceLog);
  $("steps").textContent = `${controller.state.steps} steps`;
  renderNotice(
    $("notice"),
    controller.staleNotice ? "state changed underneath you; actions were refreshed" : null,
  );
}

async function syncTrace(): Promise<void> {
  const body = await controller.exportTrace();
  traceLog.length = 0;
  traceLog.push(...body.trace);
}

async function pick(index: number): Promise<void> {
  await controller.step(index);
  await syncTrace();
  redraw();
}

async function loadFromTextarea(): Promise<void> {
  const source = ($("config") as HTMLTextAreaElement).value;
  let config: unknown;
  try {
    config = JSON.parse(source);
  } catch (err) {
    renderNotice($("notice"), `config is not valid JSON: ${err}`);
    return;
  }
  try {
    await controller.load(config);
  } catch (err) {
    renderNotice($("notice"), `could not create session: ${err}`);
    return;
  }
  traceLog.length = 0;
  redraw();
}

function download(filename: string, payload: unknown): void {
  const blob = new Blob([JSON.stringify(payload, null, 1)], {
    type: "application/json",
  });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}

function wire(): void {
  $("load").addEventListener("click", () => void loadFromTextarea());
  $("undo").addEventListener("click", async () => {
    await controller.undo();
    await syncTrace();
    redraw();
  });
  $("auto-tau").addEventListener("click", async () => {
    await controller.autoTau();
    await syncTrace();
    redraw();
  });
  $("export").addEventListener("click", async () => {
    const body = await controller.exportTrace();
    download("session.trace", { trace: body.trace });
  });
  $("bookmark").addEventListener("click", () => {
    controller.addBookmark(`after ${controller.state?.steps ?? 0} steps`);
    const list = $("bookmarks");
    list.replaceChildren();
    controller.bookmarks.forEach((b) => {
      const item = document.createElement("li");
      item.textContent = `${b.label} (${b.steps} steps)`;
      list.appendChild(item);
    });
  });
}

wire();
