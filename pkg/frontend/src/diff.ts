// Client-side diff between two consecutive state payloads, used to
// highlight what the last step changed.

import { NodeView, ProcessView } from "./types";

export interface StateDiff {
  changedPids: number[];
  changedEdges: string[]; // "src->dst"
}

function processKey(p: ProcessView): string {
  return JSON.stringify(p);
}

export function edgeKey(src: number, dst: number): string {
  return `${src}->${dst}`;
}

export function diffNodes(before: NodeView, after: NodeView): StateDiff {
  const beforeProcs = new Map(before.processes.map((p) => [p.pid, processKey(p)]));
  const afterProcs = new Map(after.processes.map((p) => [p.pid, processKey(p)]));
  const changedPids: number[] = [];
  for (const pid of new Set([...beforeProcs.keys(), ...afterProcs.keys()])) {
    if (beforeProcs.get(pid) !== afterProcs.get(pid)) changedPids.push(pid);
  }
  changedPids.sort((a, b) => a - b);

  const beforeEdges = new Map(
    before.ether.map((e) => [edgeKey(e.src, e.dst), JSON.stringify(e.signals)]),
  );
  const afterEdges = new Map(
    after.ether.map((e) => [edgeKey(e.src, e.dst), JSON.stringify(e.signals)]),
  );
  const changedEdges: string[] = [];
  for (const key of new Set([...beforeEdges.keys(), ...afterEdges.keys()])) {
    if (beforeEdges.get(key) !== afterEdges.get(key)) changedEdges.push(key);
  }
  changedEdges.sort();
  return { changedPids, changedEdges };
}
