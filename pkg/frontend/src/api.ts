// Protocol client for the session service. The event stream uses fetch
// streaming rather than EventSource so the same code runs in the browser
// and under node-based tests.

import type {
  CreateSessionResponse,
  DisplayCommand,
  ReportResponse,
  SessionState,
  TurnResponse,
} from "./types.js";

export interface ClientConfig {
  baseUrl: string;
  fetchImpl?: typeof fetch;
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    throw new Error(`HTTP ${resp.status}: ${await resp.text()}`);
  }
  return (await resp.json()) as T;
}

export class SessionClient {
  private readonly base: string;
  private readonly doFetch: typeof fetch;

  constructor(config: ClientConfig) {
    this.base = config.baseUrl.replace(/\/$/, "");
    this.doFetch = config.fetchImpl ?? fetch.bind(globalThis);
  }

  createSession(scenario: string, seed: number, channel = "KEYBOARD"): Promise<CreateSessionResponse> {
    return this.doFetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scenario, seed, channel }),
    }).then((r) => asJson<CreateSessionResponse>(r));
  }

  turn(sessionId: string, text: string): Promise<TurnResponse> {
    return this.doFetch(`${this.base}/sessions/${sessionId}/turn`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    }).then((r) => asJson<TurnResponse>(r));
  }

  state(sessionId: string): Promise<SessionState> {
    return this.doFetch(`${this.base}/sessions/${sessionId}/state`)
      .then((r) => asJson<SessionState>(r));
  }

  report(sessionId: string): Promise<ReportResponse> {
    return this.doFetch(`${this.base}/sessions/${sessionId}/report`)
      .then((r) => asJson<ReportResponse>(r));
  }

  /** Subscribe to the display-command stream from the given cursor.
   * Returns a function that cancels the subscription. */
  subscribeEvents(
    sessionId: string,
    cursor: number,
    onCommand: (cmd: DisplayCommand) => void,
    options: { idleTimeout?: number; onError?: (err: unknown) => void } = {},
  ): () => void {
    const controller = new AbortController();
    const params = new URLSearchParams({ cursor: String(cursor) });
    if (options.idleTimeout !== undefined) {
      params.set("idle_timeout", String(options.idleTimeout));
    }
    const url = `${this.base}/sessions/${sessionId}/events?${params}`;
    (async () => {
      try {
        const resp = await this.doFetch(url, { signal: controller.signal });
        if (!resp.ok || !resp.body) {
          throw new Error(`event stream failed: HTTP ${resp.status}`);
        }
        const reader = resp.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          let sep: number;
          while ((sep = buffer.indexOf("\n\n")) >= 0) {
            const frame = buffer.slice(0, sep);
            buffer = buffer.slice(sep + 2);
            for (const line of frame.split("\n")) {
              if (line.startsWith("data: ")) {
                onCommand(JSON.parse(line.slice(6)) as DisplayCommand);
              }
            }
          }
        }
      } catch (err) {
        if (!controller.signal.aborted && options.onError) {
          options.onError(err);
        }
      }
    })();
    return () => controller.abort();
  }
}
