// Wire types mirroring schema/chat_api.schema.json (the only artifact shared
// with the service). Timestamps are UTC ISO-8601 at seconds resolution.
export const SESSION_STORAGE_KEY = "dialoglab.session.user_id";
export const WEB_CHANNEL = "web";
export function nowInstant(clock = () => new Date()) {
    return clock().toISOString().replace(/\.\d{3}Z$/, "Z");
}
export function randomId(prefix) {
    const noise = Math.random().toString(36).slice(2, 10);
    return `${prefix}-${Date.now().toString(36)}-${noise}`;
}
/** Session user id survives reloads so the server-side context resumes. */
export function loadSession(storage) {
    let userId = storage.getItem(SESSION_STORAGE_KEY);
    if (!userId) {
        userId = randomId("visitor");
        storage.setItem(SESSION_STORAGE_KEY, userId);
    }
    return { channelId: WEB_CHANNEL, userId };
}
export function textMessage(session, text, clock) {
    return envelope(session, { type: "text", text }, clock);
}
export function quickReplyMessage(session, optionId, clock) {
    return envelope(session, { type: "quick_reply", option_id: optionId }, clock);
}
function envelope(session, payload, clock) {
    return {
        channel_id: session.channelId,
        user_id: session.userId,
        message_id: randomId("msg"),
        timestamp: nowInstant(clock),
        payload,
    };
}
