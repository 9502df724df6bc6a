import { describe, expect, it } from "vitest";

import { diffNodes } from "../src/diff";
import { NodeView } from "../src/types";

const base: NodeView = {
  ether: [{ src: 1, dst: 2, signals: [{ kind: "message", text: "'fst'" }] }],
  processes: [
    {
      pid: 1,
      status: "live",
      stack: [],
      redex: "'snd'",
      mailbox: [],
      links: [],
      trap_exit: false,
    },
    {
      pid: 2,
      status: "live",
      stack: [],
      redex: "receive X -> X end",
      mailbox: [],
      links: [],
      trap_exit: false,
    },
  ],
};

describe("diffNodes", () => {
  it("reports no changes for identical states", () => {
    const diff = diffNodes(base, JSON.parse(JSON.stringify(base)));
    expect(diff.changedPids).toEqual([]);
    expect(diff.changedEdges).toEqual([]);
  });

  it("flags a process whose mailbox changed", () => {
    const after: NodeView = JSON.parse(JSON.stringify(base));
    (after.processes[1] as { mailbox: string[] }).mailbox = ["'fst'"];
    const diff = diffNodes(base, after);
    expect(diff.changedPids).toEqual([2]);
  });

  it("flags removed processes and emptied edges", () => {
    const after: NodeView = { ether: [], processes: [base.processes[0]] };
    const diff = diffNodes(base, after);
    expect(diff.changedPids).toEqual([2]);
    expect(diff.changedEdges).toEqual(["1->2"]);
  });

  it("flags queue-content changes on an existing edge", () => {
    const after: NodeView = JSON.parse(JSON.stringify(base));
    after.ether[0].signals.push({ kind: "link" });
    const diff = diffNodes(base, after);
    expect(diff.changedEdges).toEqual(["1->2"]);
    expect(diff.changedPids).toEqual([]);
  });
});
