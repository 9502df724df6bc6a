// DOM rendering of the four panels: processes, ether, enabled actions,
// and the trace timeline. Rendering is a pure function of the data
// passed in; wiring lives in main.ts.

import { StateDiff, edgeKey } from "./diff";
import { EnabledEntry, NodeView, ProcessView, TraceEntry } from "./types";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderProcess(p: ProcessView, changed: boolean): HTMLElement {
  const card = el("div", `process ${p.status}${changed ? " changed" : ""}`);
  const title = el("div", "proc-title", `pid ${p.pid}`);
  title.appendChild(el("span", `badge ${p.status}`, p.status));
  card.appendChild(title);
  if (p.status === "live") {
    if (p.trap_exit) title.appendChild(el("span", "badge trap", "traps exits"));
    card.appendChild(el("div", "redex", p.redex));
    const stack = el("div", "stack");
    stack.appendChild(el("div", "panel-label", `stack (${p.stack.length})`));
    p.stack.forEach((frame) => stack.appendChild(el("div", "frame", frame)));
    card.appendChild(stack);
    const mailbox = el("div", "mailbox");
    mailbox.appendChild(el("div", "panel-label", `mailbox (${p.mailbox.length})`));
    p.mailbox.forEach((msg) => mailbox.appendChild(el("div", "message", msg)));
    card.appendChild(mailbox);
    card.appendChild(
      el("div", "links", p.links.length ? `links: ${p.links.join(", ")}` : "links: none"),
    );
  } else {
    const pending = p.obligations
      .map((o) => `pid ${o.pid} gets ${o.reason}`)
      .join("; ");
    card.appendChild(el("div", "obligations", pending || "all links notified"));
  }
  return card;
}

export function renderProcesses(
  container: HTMLElement,
  node: NodeView,
  diff: StateDiff,
): void {
  container.replaceChildren();
  node.processes.forEach((p) =>
    container.appendChild(renderProcess(p, diff.changedPids.includes(p.pid))),
  );
  if (!node.processes.length) container.appendChild(el("div", "empty", "empty pool"));
}

export function renderEther(
  container: HTMLElement,
  node: NodeView,
  diff: StateDiff,
): void {
  container.replaceChildren();
  node.ether.forEach((edge) => {
    const key = edgeKey(edge.src, edge.dst);
    const row = el("div", `edge${diff.changedEdges.includes(key) ? " changed" : ""}`);
    row.appendChild(el("span", "edge-key", `${edge.src} → ${edge.dst}`));
    const queue = el("span", "queue");
    edge.signals.forEach((signal) => {
      const label =
        signal.kind === "message"
          ? `msg ${signal.text ?? ""}`
          : signal.kind === "exit"
            ? `exit ${signal.text ?? ""}${signal.from_link ? " (link)" : ""}`
            : signal.kind;
      queue.appendChild(el("span", `signal ${signal.kind}`, label.trim()));
    });
    row.appendChild(queue);
    container.appendChild(row);
  });
  if (!node.ether.length) container.appendChild(el("div", "empty", "ether empty"));
}

export function renderEnabled(
  container: HTMLElement,
  enabled: EnabledEntry[],
  onPick: (index: number) => void,
): void {
  container.replaceChildren();
  enabled.forEach((entry) => {
    const button = el("button", `action ${entry.action.kind}`) as HTMLButtonElement;
    button.textContent = entry.description;
    button.addEventListener("click", () => onPick(entry.index));
    container.appendChild(button);
  });
  if (!enabled.length) container.appendChild(el("div", "empty", "node is quiescent"));
}

export function renderTrace(container: HTMLElement, trace: TraceEntry[]): void {
  container.replaceChildren();
  trace.forEach((entry, i) => {
    container.appendChild(
      el("div", "trace-entry", `${i + 1}. pid ${entry.pid}: ${entry.action.kind}`),
    );
  });
  if (!trace.length) container.appendChild(el("div", "empty", "no steps yet"));
}

export function renderNotice(container: HTMLElement, text: string | null): void {
  container.replaceChildren();
  if (text) container.appendChild(el("div", "notice", text));
}
