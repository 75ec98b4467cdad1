import type { ActionResponse, InboundMessage, WireAction } from "./messages.js";

/** HTTP-level rejection from the service (4xx/5xx with an error body). */
export class ApiError extends Error {
  readonly status: number;
  readonly field?: string;

  constructor(status: number, message: string, field?: string) {
    super(message);
    this.status = status;
    this.field = field;
  }
}

export class ChatClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: typeof fetch;

  constructor(baseUrl = "", fetchImpl: typeof fetch = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  /** POST one message; resolves to the ordered action list for the turn. */
  async send(message: InboundMessage): Promise<WireAction[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/v1/messages`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(message),
    });
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      let field: string | undefined;
      try {
        const body = (await response.json()) as { error?: { message?: string; field?: string } };
        detail = body.error?.message ?? detail;
        field = body.error?.field;
      } catch {
        // detail-free bodies keep the status text
      }
      throw new ApiError(response.status, detail, field);
    }
    const body = (await response.json()) as ActionResponse;
    return body.actions;
  }
}
