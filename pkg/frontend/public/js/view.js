import { ApiError } from "./client.js";
import { quickReplyMessage, textMessage, } from "./messages.js";
/**
 * Chat surface: append-only transcript, typing indicator, quick-reply
 * buttons, composer. One request in flight per session; the composer is
 * disabled while the bot is "typing". Failed sends stay in the transcript
 * marked unsent with a retry affordance, so nothing is lost.
 */
export class ChatView {
    constructor(root, client, session, clock) {
        this.pending = false;
        this.root = root;
        this.client = client;
        this.session = session;
        this.clock = clock;
    }
    mount() {
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
    async sendText(text) {
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
    async pickOption(group, option) {
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
    async deliver(message, bubble) {
        this.setPending(true);
        this.clearBanner();
        try {
            const actions = await this.client.send(message);
            for (const action of actions) {
                this.renderAction(action);
            }
        }
        catch (error) {
            if (error instanceof ApiError) {
                bubble.classList.add("failed");
                const where = error.field ? ` (${error.field})` : "";
                this.showBanner(`The service rejected the message${where}: ${error.message}`);
            }
            else {
                this.markUnsent(message, bubble);
                this.showBanner("Could not reach the service — the message was not sent.");
            }
        }
        finally {
            this.setPending(false);
        }
    }
    renderAction(action) {
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
    appendUserBubble(text) {
        return this.appendBubble("user", text);
    }
    appendBotBubble(text, extraClass) {
        return this.appendBubble("bot", text, extraClass);
    }
    appendBubble(direction, text, extraClass) {
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
    appendQuickReplies(prompt, options) {
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
    markUnsent(message, bubble) {
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
    setPending(pending) {
        this.pending = pending;
        this.input.disabled = pending;
        this.sendButton.disabled = pending;
        if (pending) {
            this.indicator.classList.add("visible");
        }
        else {
            this.hideIndicator();
            this.input.focus();
        }
    }
    hideIndicator() {
        this.indicator.classList.remove("visible");
    }
    showBanner(text) {
        this.banner.textContent = text;
        this.banner.classList.add("visible");
    }
    clearBanner() {
        this.banner.textContent = "";
        this.banner.classList.remove("visible");
    }
    scrollToEnd() {
        this.transcript.scrollTop = this.transcript.scrollHeight;
    }
    /** Transcript as (direction, text) rows, in render order. */
    entries() {
        return Array.from(this.transcript.querySelectorAll(".bubble")).map((el) => ({
            direction: el.dataset.direction ?? "",
            text: el.querySelector(".text")?.textContent ?? "",
        }));
    }
    query(selector) {
        const el = this.root.querySelector(selector);
        if (!el) {
            throw new Error(`missing element ${selector}`);
        }
        return el;
    }
}
