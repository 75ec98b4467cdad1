import { ApiError, ChatClient } from "./client.js";
import {
  InboundMessage,
  QuickReplyOption,
  Session,
  WireAction,
  quickReplyMessage,
  textMessage,
} from "./messages.js";

/**
 * Chat surface: append-only transcript, typing indicator, quick-reply
 * buttons, composer. One request in flight per session; the composer is
 * disabled while the bot is "typing". Failed sends stay in the transcript
 * marked unsent with a retry affordance, so nothing is lost.
 */
export class ChatView {
  readonly root: HTMLElement;
  private readonly client: ChatClient;
  private readonly session: Session;
  private readonly clock?: () => Date;

  private transcript!: HTMLElement;
  private indicator!: HTMLElement;
  private banner!: HTMLElement;
  private input!: HTMLInputElement;
  private sendButton!: HTMLButtonElement;

  pending = false;

  constructor(root: HTMLElement, client: ChatClient, session: Session, clock?: () => Date) {
    this.root = root;
    this.client = client;
    this.session = session;
    this.clock = clock;
  }

  mount(): void {
    this.root.innerHTML = `
      <div class="chat">
        <div class="transcript" aria-live="polite"></div>
        <div class="typing-indicator" role="status" aria-label="bot is typing">
          <span></span><span></span><span></span>
        </div>
        <div class="error-banner" role="alert"></div>
        <form class="composer">
          <input type="text" autocomplete="off" placeholder="Type a message" aria-label="message" />
          <button type="submit">Send</button>
        </form>
      </div>`;
    this.transcript = this.query(".transcript");
    this.indicator = this.query(".typing-indicator");
    this.banner = this.query(".error-banner");
    this.input = this.query("input");
    this.sendButton = this.query("button[type=submit]");
    this.query("form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.sendText(this.input.value);
    });
  }

  /** Free-text send; empty input is ignored. */
  async sendText(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed || this.pending) {
      return;
    }
    this.input.value = "";
    const message = textMessage(this.session, trimmed, this.clock);
    const bubble = this.appendUserBubble(trimmed);
    await this.deliver(message, bubble);
  }

  /** Quick-reply pick; disables the whole button group. */
  async pickOption(group: HTMLElement, option: QuickReplyOption): Promise<void> {
    if (this.pending) {
      return;
    }
    for (const button of Array.from(group.querySelectorAll("button"))) {
      button.disabled = true;
      if (button.dataset.optionId === option.id) {
        button.classList.add("selected");
      }
    }
    const message = quickReplyMessage(this.session, option.id, this.clock);
    const bubble = this.appendUserBubble(option.label);
    await this.deliver(message, bubble);
  }

  private async deliver(message: InboundMessage, bubble: HTMLElement): Promise<void> {
    this.setPending(true);
    this.clearBanner();
    try {
      const actions = await this.client.send(message);
      for (const action of actions) {
        this.renderAction(action);
      }
    } catch (error) {
      if (error instanceof ApiError) {
        bubble.classList.add("failed");
        const where = error.field ? ` (${error.field})` : "";
        this.showBanner(`The service rejected the message${where}: ${error.message}`);
      } else {
        this.markUnsent(message, bubble);
        this.showBanner("Could not reach the service — the message was not sent.");
      }
    } finally {
      this.setPending(false);
    }
  }

  private renderAction(action: WireAction): void {
    const inner = action.action;
    switch (inner.type) {
      case "send_typing":
        this.indicator.classList.add("visible");
        return;
      case "send_text":
        this.hideIndicator();
        this.appendBotBubble(inner.text ?? "");
        return;
      case "send_quick_replies":
        this.hideIndicator();
        this.appendQuickReplies(inner.text, inner.options ?? []);
        return;
      case "request_media":
        this.hideIndicator();
        this.appendBotBubble(inner.text ?? "Please send an attachment.", "media-request");
        return;
    }
  }

  private appendUserBubble(text: string): HTMLElement {
    return this.appendBubble("user", text);
  }

  private appendBotBubble(text: string, extraClass?: string): HTMLElement {
    return this.appendBubble("bot", text, extraClass);
  }

  private appendBubble(direction: "user" | "bot", text: string, extraClass?: string): HTMLElement {
    const bubble = document.createElement("div");
    bubble.className = `bubble ${direction}` + (extraClass ? ` ${extraClass}` : "");
    bubble.dataset.direction = direction;
    const span = document.createElement("span");
    span.className = "text";
    span.textContent = text;
    bubble.appendChild(span);
    this.transcript.appendChild(bubble);
    this.scrollToEnd();
    return bubble;
  }

  private appendQuickReplies(prompt: string | undefined, options: QuickReplyOption[]): void {
    const bubble = this.appendBotBubble(prompt ?? "");
    const group = document.createElement("div");
    group.className = "quick-replies";
    for (const option of options) {
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = option.label;
      button.dataset.optionId = option.id;
      button.addEventListener("click", () => void this.pickOption(group, option));
      group.appendChild(button);
    }
    bubble.appendChild(group);
    this.scrollToEnd();
  }

  private markUnsent(message: InboundMessage, bubble: HTMLElement): void {
    bubble.classList.add("unsent");
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      bubble.classList.remove("unsent");
      retry.remove();
      // resend the identical message so nothing is lost or duplicated
      void this.deliver(message, bubble);
    });
    bubble.appendChild(retry);
  }

  private setPending(pending: boolean): void {
    this.pending = pending;
    this.input.disabled = pending;
    this.sendButton.disabled = pending;
    if (pending) {
      this.indicator.classList.add("visible");
    } else {
      this.hideIndicator();
      this.input.focus();
    }
  }

  private hideIndicator(): void {
    this.indicator.classList.remove("visible");
  }

  private showBanner(text: string): void {
    this.banner.textContent = text;
    this.banner.classList.add("visible");
  }

  private clearBanner(): void {
    this.banner.textContent = "";
    this.banner.classList.remove("visible");
  }

  private scrollToEnd(): void {
    this.transcript.scrollTop = this.transcript.scrollHeight;
  }

  /** Transcript as (direction, text) rows, in render order. */
  entries(): Array<{ direction: string; text: string }> {
    return Array.from(this.transcript.querySelectorAll(".bubble")).map((el) => ({
      direction: (el as HTMLElement).dataset.direction ?? "",
      text: el.querySelector(".text")?.textContent ?? "",
    }));
  }

  private query<T extends HTMLElement>(selector: string): T {
    const el = this.root.querySelector(selector);
    if (!el) {
      throw new Error(`missing element ${selector}`);
    }
    return el as T;
  }
}
