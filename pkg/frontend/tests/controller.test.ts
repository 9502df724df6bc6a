// Controller behaviour against a scripted in-memory server double.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { SessionApi } from "../src/api";
import { SessionController } from "../src/controller";
import { NodeView } from "../src/types";

function nodeWith(redex: string): NodeView {
  return {
    ether: [],
    processes: [
      {
        pid: 1,
        status: "live",
        stack: [],
        redex,
        mailbox: [],
        links: [],
        trap_exit: false,
      },
    ],
  };
}

interface FakeServer {
  revision: number;
  steps: number;
  redexes: string[];
  forceStaleOnce: boolean;
}

function installFetchDouble(server: FakeServer) {
  const handler = async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    const json = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), { status });

    const state = () => ({
      session_id: "s1",
      revision: server.revision,
      steps: server.steps,
      node: nodeWith(server.redexes[Math.min(server.steps, server.redexes.length - 1)]),
    });

    if (url.endsWith("/sessions") && init?.method === "POST") {
      return json(200, state());
    }
    if (url.endsWith("/state")) {
      return json(200, state());
    }
    if (url.endsWith("/enabled")) {
      return json(200, {
        session_id: "s1",
        revision: server.revision,
        enabled:
          server.steps + 1 < server.redexes.length
            ? [
                {
                  index: 0,
                  pid: 1,
                  action: { kind: "tau" },
                  description: "pid 1: sequential step",
                },
              ]
            : [],
      });
    }
    if (url.endsWith("/step")) {
      if (server.forceStaleOnce || body.revision !== server.revision) {
        server.forceStaleOnce = false;
        return json(409, { detail: "stale revision" });
      }
      server.steps += 1;
      server.revision += 1;
      return json(200, { applied: { pid: 1, action: { kind: "tau" } }, ...state() });
    }
    if (url.endsWith("/undo")) {
      if (server.steps === 0) return json(409, { detail: "nothing to undo" });
      server.steps -= 1;
      server.revision += 1;
      return json(200, state());
    }
    if (url.endsWith("/trace")) {
      return json(200, {
        session_id: "s1",
        trace: Array.from({ length: server.steps }, () => ({
          pid: 1,
          action: { kind: "tau" },
        })),
      });
    }
    return json(404, { detail: "unknown route" });
  };
  vi.stubGlobal("fetch", handler);
}

describe("SessionController", () => {
  let server: FakeServer;
  let controller: SessionController;

  beforeEach(async () => {
    server = {
      revision: 0,
      steps: 0,
      redexes: ["let X = 0 in X", "0", "0"],
      forceStaleOnce: false,
    };
    installFetchDouble(server);
    controller = new SessionController(new SessionApi("http://test"));
    await controller.load({ processes: [] });
  });

  afterEach(() => vi.unstubAllGlobals());

  it("loads a session and fetches the enabled list", () => {
    expect(controller.sessionId).toBe("s1");
    expect(controller.enabled).toHaveLength(1);
    expect(controller.revision).toBe(0);
  });

  it("steps, diffs the change, and refreshes enabled", async () => {
    await controller.step(0);
    expect(controller.state?.steps).toBe(1);
    expect(controller.lastDiff.changedPids).toEqual([1]);
    expect(controller.revision).toBe(1);
  });

  it("surfaces 409 as a stale notice and resynchronises", async () => {
    server.forceStaleOnce = true;
    await controller.step(0);
    expect(controller.staleNotice).toBe(true);
    expect(controller.state?.steps).toBe(0);
    // next attempt works because the controller refreshed its revision
    await controller.step(0);
    expect(controller.state?.steps).toBe(1);
  });

  it("undo pops exactly one step", async () => {
    await controller.step(0);
    await controller.undo();
    expect(controller.state?.steps).toBe(0);
  });

  it("exported trace length tracks the steps taken", async () => {
    await controller.step(0);
    const body = await controller.exportTrace();
    expect(body.trace).toHaveLength(1);
  });

  it("stepMatching reports offered actions when nothing matches", async () => {
    await expect(
      controller.stepMatching((e) => e.action.kind === "spawn"),
    ).rejects.toThrow(/no enabled action matches/);
  });
});
