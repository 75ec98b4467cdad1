// Wire types mirroring schema/chat_api.schema.json (the only artifact shared
// with the service). Timestamps are UTC ISO-8601 at seconds resolution.

export type Payload =
  | { type: "text"; text: string }
  | { type: "quick_reply"; option_id: string };

export interface InboundMessage {
  channel_id: string;
  user_id: string;
  message_id: string;
  timestamp: string;
  payload: Payload;
}

export interface QuickReplyOption {
  id: string;
  label: string;
}

export interface WireAction {
  action: {
    type: "send_text" | "send_quick_replies" | "send_typing" | "request_media";
    text?: string;
    options?: QuickReplyOption[];
    metadata?: Record<string, string>;
  };
}

export interface ActionResponse {
  actions: WireAction[];
}

export interface Session {
  channelId: string;
  userId: string;
}

export const SESSION_STORAGE_KEY = "dialoglab.session.user_id";
export const WEB_CHANNEL = "web";

export function nowInstant(clock: () => Date = () => new Date()): string {
  return clock().toISOString().replace(/\.\d{3}Z$/, "Z");
}

export function randomId(prefix: string): string {
  const noise = Math.random().toString(36).slice(2, 10);
  return `${prefix}-${Date.now().toString(36)}-${noise}`;
}

/** Session user id survives reloads so the server-side context resumes. */
export function loadSession(storage: Storage): Session {
  let userId = storage.getItem(SESSION_STORAGE_KEY);
  if (!userId) {
    userId = randomId("visitor");
    storage.setItem(SESSION_STORAGE_KEY, userId);
  }
  return { channelId: WEB_CHANNEL, userId };
}

export function textMessage(session: Session, text: string, clock?: () => Date): InboundMessage {
  return envelope(session, { type: "text", text }, clock);
}

export function quickReplyMessage(
  session: Session,
  optionId: string,
  clock?: () => Date,
): InboundMessage {
  return envelope(session, { type: "quick_reply", option_id: optionId }, clock);
}

function envelope(session: Session, payload: Payload, clock?: () => Date): InboundMessage {
  return {
    channel_id: session.channelId,
    user_id: session.userId,
    message_id: randomId("msg"),
    timestamp: nowInstant(clock),
    payload,
  };
}
