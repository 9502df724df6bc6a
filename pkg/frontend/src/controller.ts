// Session controller: the non-DOM core of the stepper. Holds the latest
// state and enabled list, performs steps/undo/auto against the service,
// and recomputes the highlight diff after every change. Every step
// round-trips to the server and re-fetches the enabled list, so the
// actions shown always belong to the state shown.

import { SessionApi, StaleStateError } from "./api";
import { diffNodes, StateDiff } from "./diff";
import {
  EnabledEntry,
  NodeView,
  StateResponse,
  TraceResponse,
} from "./types";

export interface Bookmark {
  label: string;
  steps: number;
  node: NodeView;
}

export class SessionController {
  sessionId: string | null = null;
  state: StateResponse | null = null;
  enabled: EnabledEntry[] = [];
  revision = -1;
  lastDiff: StateDiff = { changedPids: [], changedEdges: [] };
  staleNotice = false;
  bookmarks: Bookmark[] = [];

  constructor(private api: SessionApi) {}

  private requireSession(): string {
    if (this.sessionId === null) throw new Error("no session loaded");
    return this.sessionId;
  }

  async load(config: unknown): Promise<void> {
    const state = await this.api.createSession(config);
    this.sessionId = state.session_id;
    this.state = state;
    this.bookmarks = [];
    this.lastDiff = { changedPids: [], changedEdges: [] };
    await this.refreshEnabled();
  }

  async refreshEnabled(): Promise<void> {
    const id = this.requireSession();
    const body = await this.api.enabled(id);
    this.enabled = body.enabled;
    this.revision = body.revision;
    this.staleNotice = false;
  }

  async refreshState(): Promise<void> {
    const id = this.requireSession();
    this.state = await this.api.state(id);
    await this.refreshEnabled();
  }

  async step(index: number): Promise<void> {
    const id = this.requireSession();
    const before = this.state?.node;
    try {
      const next = await this.api.step(id, index, this.revision);
      this.state = next;
      if (before) this.lastDiff = diffNodes(before, next.node);
    } catch (err) {
      if (err instanceof StaleStateError) {
        await this.refreshState();
        this.staleNotice = true;
        return;
      }
      throw err;
    }
    await this.refreshEnabled();
  }

  async undo(): Promise<void> {
    const id = this.requireSession();
    const before = this.state?.node;
    const next = await this.api.undo(id);
    this.state = next;
    if (before) this.lastDiff = diffNodes(before, next.node);
    await this.refreshEnabled();
  }

  async autoTau(maxSteps = 1000): Promise<number> {
    const id = this.requireSession();
    const before = this.state?.node;
    const body = await this.api.auto(id, "tau-only", maxSteps);
    this.state = body;
    if (before) this.lastDiff = diffNodes(before, body.node);
    await this.refreshEnabled();
    return body.applied.length;
  }

  async autoRandom(steps: number, seed?: number): Promise<number> {
    const id = this.requireSession();
    const before = this.state?.node;
    const body = await this.api.auto(id, "random", steps, seed);
    this.state = body;
    if (before) this.lastDiff = diffNodes(before, body.node);
    await this.refreshEnabled();
    return body.applied.length;
  }

  async exportTrace(): Promise<TraceResponse> {
    return this.api.trace(this.requireSession());
  }

  addBookmark(label: string): void {
    if (!this.state) return;
    this.bookmarks.push({
      label,
      steps: this.state.steps,
      node: this.state.node,
    });
  }

  // Convenience for scripted walkthroughs: fire the enabled action
  // matching a predicate, failing loudly when it is not on offer.
  async stepMatching(predicate: (entry: EnabledEntry) => boolean): Promise<void> {
    const entry = this.enabled.find(predicate);
    if (!entry) {
      throw new Error(
        `no enabled action matches; offered: ${this.enabled
          .map((e) => e.description)
          .join(" | ")}`,
      );
    }
    await this.step(entry.index);
  }
}
