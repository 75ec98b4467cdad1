/** HTTP-level rejection from the service (4xx/5xx with an error body). */
export class ApiError extends Error {
    constructor(status, message, field) {
        super(message);
        this.status = status;
        this.field = field;
    }
}
export class ChatClient {
    constructor(baseUrl = "", fetchImpl = fetch) {
        this.baseUrl = baseUrl.replace(/\/$/, "");
        this.fetchImpl = fetchImpl;
    }
    /** POST one message; resolves to the ordered action list for the turn. */
    async send(message) {
        const response = await this.fetchImpl(`${this.baseUrl}/v1/messages`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(message),
        });
        if (!response.ok) {
            let detail = `HTTP ${response.status}`;
            let field;
            try {
                const body = (await response.json());
                detail = body.error?.message ?? detail;
                field = body.error?.field;
            }
            catch {
                // detail-free bodies keep the status text
            }
            throw new ApiError(response.status, detail, field);
        }
        const body = (await response.json());
        return body.actions;
    }
}
