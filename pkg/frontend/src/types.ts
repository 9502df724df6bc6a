// Payload shapes of the session API. The client renders exactly what the
// server sends; it never evaluates anything itself.

export interface SignalView {
  kind: "message" | "exit" | "link" | "unlink";
  text?: string;
  from_link?: boolean;
}

export interface EtherEdgeView {
  src: number;
  dst: number;
  signals: SignalView[];
}

export interface LiveProcessView {
  pid: number;
  status: "live";
  stack: string[];
  redex: string;
  mailbox: string[];
  links: number[];
  trap_exit: boolean;
}

export interface DeadProcessView {
  pid: number;
  status: "dead";
  obligations: { pid: number; reason: string }[];
}

export type ProcessView = LiveProcessView | DeadProcessView;

export interface NodeView {
  ether: EtherEdgeView[];
  processes: ProcessView[];
}

export interface StateResponse {
  session_id: string;
  revision: number;
  steps: number;
  node: NodeView;
}

export interface ActionView {
  kind: string;
  [key: string]: unknown;
}

export interface EnabledEntry {
  index: number;
  pid: number;
  action: ActionView;
  description: string;
}

export interface EnabledResponse {
  session_id: string;
  revision: number;
  enabled: EnabledEntry[];
}

export interface TraceEntry {
  pid: number;
  action: ActionView;
}

export interface TraceResponse {
  session_id: string;
  trace: TraceEntry[];
}

export interface StepResponse extends StateResponse {
  applied: TraceEntry;
}

export interface AutoResponse extends StateResponse {
  applied: TraceEntry[];
}
