// Application wiring: session lifecycle, the submit flow with its
// in-flight guard, and event application in arrival order.

import { SessionClient } from "./api.js";
import {
  appendUserLine,
  applyCommand,
  emptyView,
  markTransportFailure,
  viewFromState,
  type ViewState,
} from "./viewstate.js";

export interface AppOptions {
  baseUrl: string;
  scenario?: string;
  seed?: number;
  onChange?: (view: ViewState) => void;
  fetchImpl?: typeof fetch;
}

export class DialogueApp {
  readonly client: SessionClient;
  view: ViewState = emptyView();
  sessionId: string | null = null;
  private inFlight = false;
  private unsubscribe: (() => void) | null = null;
  private readonly onChange: (view: ViewState) => void;
  private readonly scenario: string;
  private readonly seed: number;

  constructor(options: AppOptions) {
    this.client = new SessionClient({
      baseUrl: options.baseUrl,
      fetchImpl: options.fetchImpl,
    });
    this.onChange = options.onChange ?? (() => undefined);
    this.scenario = options.scenario ?? "three-trains";
    this.seed = options.seed ?? 0;
  }

  private update(view: ViewState): void {
    this.view = view;
    this.onChange(view);
  }

  async start(): Promise<void> {
    const created = await this.client.createSession(this.scenario, this.seed);
    this.sessionId = created.sessionId;
    const state = await this.client.state(created.sessionId);
    let view = viewFromState(state);
    view = { ...view, transcript: [{ speaker: "SYSTEM", text: created.greeting }, ...view.transcript] };
    this.update(view);
    this.unsubscribe = this.client.subscribeEvents(
      created.sessionId,
      state.eventCursor,
      (cmd) => this.update(applyCommand(this.view, cmd)),
      { onError: () => this.update(markTransportFailure(this.view, "(event stream lost — reload to resync)")) },
    );
  }

  /** Resync from the state endpoint, as a page reload would. */
  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    const state = await this.client.state(this.sessionId);
    this.update(viewFromState(state));
  }

  get busy(): boolean {
    return this.inFlight;
  }

  /** Submit one user turn. Empty input and double submits are no-ops. */
  async submitTurn(text: string): Promise<boolean> {
    const trimmed = text.trim();
    if (!trimmed || this.inFlight || !this.sessionId || this.view.complete) {
      return false;
    }
    this.inFlight = true;
    this.update({ ...appendUserLine(this.view, trimmed), pendingInput: false });
    try {
      const resp = await this.client.turn(this.sessionId, trimmed);
      this.update({ ...this.view, complete: resp.complete, pendingInput: !resp.complete });
      return true;
    } catch (err) {
      this.update({
        ...markTransportFailure(this.view, "(could not reach the service — try again)"),
        pendingInput: true,
      });
      return false;
    } finally {
      this.inFlight = false;
    }
  }

  stop(): void {
    if (this.unsubscribe) {
      this.unsubscribe();
      this.unsubscribe = null;
    }
  }
}
