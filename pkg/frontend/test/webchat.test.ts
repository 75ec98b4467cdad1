// Scripted browser-level tests (jsdom): drive the real DOM component against
// a scripted transport and validate every outbound payload against the
// shared JSON schema fixture.

import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import Ajv, { ValidateFunction } from "ajv";
import { beforeEach, describe, expect, it } from "vitest";

import { ApiError, ChatClient } from "../src/client.js";
import {
  InboundMessage,
  SESSION_STORAGE_KEY,
  Session,
  WireAction,
  loadSession,
} from "../src/messages.js";
import { ChatView } from "../src/view.js";

// vitest runs from frontend/; the schema fixture lives at the repo root
const schema = JSON.parse(
  readFileSync(resolve(process.cwd(), "..", "schema", "chat_api.schema.json"), "utf-8"),
);
const ajv = new Ajv({ strict: false });
const validateInbound: ValidateFunction = ajv.compile({
  ...schema,
  $ref: "#/definitions/inbound_message",
});

const SESSION: Session = { channelId: "web", userId: "tester-1" };
const CLOCK = () => new Date("2018-06-10T12:00:00Z");

function typing(): WireAction {
  return { action: { type: "send_typing" } };
}

function text(body: string, templateId = "greet"): WireAction {
  return { action: { type: "send_text", text: body, metadata: { template_id: templateId } } };
}

function menu(prompt: string, options: Array<[string, string]>): WireAction {
  return {
    action: {
      type: "send_quick_replies",
      text: prompt,
      options: options.map(([id, label]) => ({ id, label })),
    },
  };
}

interface Exchange {
  payload: InboundMessage;
}

/** Scripted transport: each entry answers one request, in order. */
function scriptedFetch(script: Array<WireAction[] | Error | Response>) {
  const exchanges: Exchange[] = [];
  const impl = async (_url: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    exchanges.push({ payload: JSON.parse(String(init?.body)) as InboundMessage });
    const next = script.shift();
    if (next === undefined) {
      throw new Error("scripted fetch exhausted");
    }
    if (next instanceof Error) {
      throw next;
    }
    if (next instanceof Response) {
      return next;
    }
    return new Response(JSON.stringify({ actions: next }), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  };
  return { impl: impl as typeof fetch, exchanges };
}

function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (reason?: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

function mountView(fetchImpl: typeof fetch): ChatView {
  document.body.innerHTML = '<div id="chat-root"></div>';
  const root = document.getElementById("chat-root")!;
  const view = new ChatView(root, new ChatClient("", fetchImpl), SESSION, CLOCK);
  view.mount();
  return view;
}

function expectValidPayload(payload: InboundMessage): void {
  const ok = validateInbound(payload);
  expect(ok, JSON.stringify(validateInbound.errors)).toBe(true);
}

beforeEach(() => {
  window.localStorage.clear();
});

describe("sending text", () => {
  it("shows the typing indicator while pending and disables the composer", async () => {
    const turn = deferred<Response>();
    const exchanges: Exchange[] = [];
    const fetchImpl = (async (_url: RequestInfo | URL, init?: RequestInit) => {
      exchanges.push({ payload: JSON.parse(String(init?.body)) });
      return turn.promise;
    }) as typeof fetch;

    const view = mountView(fetchImpl);
    const inFlight = view.sendText("hi");

    const indicator = view.root.querySelector(".typing-indicator")!;
    const input = view.root.querySelector("input")!;
    expect(view.pending).toBe(true);
    expect(indicator.classList.contains("visible")).toBe(true);
    expect(input.disabled).toBe(true);

    turn.resolve(
      new Response(JSON.stringify({ actions: [typing(), text("Hello!")] }), { status: 200 }),
    );
    await inFlight;

    expect(view.pending).toBe(false);
    expect(indicator.classList.contains("visible")).toBe(false);
    expect(input.disabled).toBe(false);
    expect(view.entries()).toEqual([
      { direction: "user", text: "hi" },
      { direction: "bot", text: "Hello!" },
    ]);
    expectValidPayload(exchanges[0].payload);
    expect(exchanges[0].payload.payload).toEqual({ type: "text", text: "hi" });
  });

  it("renders actions exactly in server order", async () => {
    const { impl } = scriptedFetch([
      [typing(), text("first"), menu("pick one", [["a", "Option A"], ["b", "Option B"]]), text("last")],
    ]);
    const view = mountView(impl);
    await view.sendText("go");
    expect(view.entries()).toEqual([
      { direction: "user", text: "go" },
      { direction: "bot", text: "first" },
      { direction: "bot", text: "pick one" },
      { direction: "bot", text: "last" },
    ]);
  });

  it("ignores a second send while one is pending", async () => {
    const turn = deferred<Response>();
    let calls = 0;
    const fetchImpl = (async () => {
      calls += 1;
      return turn.promise;
    }) as typeof fetch;
    const view = mountView(fetchImpl);
    const first = view.sendText("one");
    await view.sendText("two");
    turn.resolve(new Response(JSON.stringify({ actions: [typing()] }), { status: 200 }));
    await first;
    expect(calls).toBe(1);
  });
});

describe("quick replies", () => {
  it("sends the picked option id and disables the button group", async () => {
    const { impl, exchanges } = scriptedFetch([
      [typing(), menu("Which model?", [["iphone_8", "iPhone 8"], ["iphone_x", "iPhone X"]])],
      [typing(), text("Got it: iPhone X.", "menu_choice_ack")],
    ]);
    const view = mountView(impl);
    await view.sendText("an iphone");

    const buttons = Array.from(
      view.root.querySelectorAll<HTMLButtonElement>(".quick-replies button"),
    );
    expect(buttons.map((b) => b.dataset.optionId)).toEqual(["iphone_8", "iphone_x"]);

    buttons[1].click();
    await Promise.resolve(); // let the click handler's async work settle
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(exchanges).toHaveLength(2);
    expectValidPayload(exchanges[1].payload);
    expect(exchanges[1].payload.payload).toEqual({ type: "quick_reply", option_id: "iphone_x" });
    expect(buttons.every((b) => b.disabled)).toBe(true);
    expect(buttons[1].classList.contains("selected")).toBe(true);
    expect(view.entries().at(-1)).toEqual({ direction: "bot", text: "Got it: iPhone X." });
  });
});

describe("failure handling", () => {
  it("marks network failures unsent and retry resends the identical payload", async () => {
    const { impl, exchanges } = scriptedFetch([
      new TypeError("fetch failed"),
      [typing(), text("welcome back")],
    ]);
    const view = mountView(impl);
    await view.sendText("hello?");

    const bubble = view.root.querySelector(".bubble.user")!;
    expect(bubble.classList.contains("unsent")).toBe(true);
    const banner = view.root.querySelector(".error-banner")!;
    expect(banner.classList.contains("visible")).toBe(true);

    const retry = bubble.querySelector<HTMLButtonElement>(".retry")!;
    retry.click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(exchanges).toHaveLength(2);
    expect(exchanges[1].payload).toEqual(exchanges[0].payload); // no message loss, no mutation
    expect(bubble.classList.contains("unsent")).toBe(false);
    expect(bubble.querySelector(".retry")).toBeNull();
    expect(view.entries().at(-1)).toEqual({ direction: "bot", text: "welcome back" });
  });

  it("shows an inline error on 400 with the offending field", async () => {
    const { impl } = scriptedFetch([
      new Response(
        JSON.stringify({ error: { field: "user_id", message: "user_id: user_id empty" } }),
        { status: 400 },
      ),
    ]);
    const view = mountView(impl);
    await view.sendText("hi");
    const banner = view.root.querySelector(".error-banner")!;
    expect(banner.classList.contains("visible")).toBe(true);
    expect(banner.textContent).toContain("user_id");
    expect(view.root.querySelector(".bubble.user")!.classList.contains("failed")).toBe(true);
  });

  it("client raises ApiError with status and field", async () => {
    const { impl } = scriptedFetch([
      new Response(JSON.stringify({ error: { field: "timestamp", message: "bad" } }), {
        status: 400,
      }),
    ]);
    const client = new ChatClient("", impl);
    await expect(
      client.send({
        channel_id: "web",
        user_id: "u",
        message_id: "m",
        timestamp: "2018-06-10T12:00:00Z",
        payload: { type: "text", text: "x" },
      }),
    ).rejects.toSatisfy((e: unknown) => e instanceof ApiError && e.status === 400 && e.field === "timestamp");
  });
});

describe("session", () => {
  it("persists the user key in browser storage across loads", () => {
    const first = loadSession(window.localStorage);
    const second = loadSession(window.localStorage);
    expect(second.userId).toBe(first.userId);
    expect(window.localStorage.getItem(SESSION_STORAGE_KEY)).toBe(first.userId);
    expect(first.channelId).toBe("web");

    window.localStorage.clear();
    const fresh = loadSession(window.localStorage);
    expect(fresh.userId).not.toBe(first.userId);
  });
});

describe("acceptance: scripted end-to-end conversation", () => {
  it("text + quick-reply turn with schema-valid payloads throughout", async () => {
    const { impl, exchanges } = scriptedFetch([
      [typing(), text("Sorry to hear that — let's get your claim on file.", "claim_intro"),
        text("What kind of damage is it?", "ask_damage_type")],
      [typing(), text("I noted damage type: theft. Is that right?", "confirm_answer")],
      [typing(), menu("Which one is yours?", [
        ["iphone_8", "iPhone 8"],
        ["iphone_8_plus", "iPhone 8 Plus"],
        ["iphone_x", "iPhone X"],
      ])],
      [typing(), text("Got it: iPhone 8 Plus.", "menu_choice_ack"),
        text("What phone number can we reach you at?", "ask_phone_number")],
    ]);
    const view = mountView(impl);
    const indicator = view.root.querySelector(".typing-indicator")!;

    await view.sendText("I want to report a damage");
    await view.sendText("it was stolen");
    await view.sendText("an iphone");

    const buttons = Array.from(
      view.root.querySelectorAll<HTMLButtonElement>(".quick-replies button"),
    );
    expect(buttons).toHaveLength(3);
    buttons[1].click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    // every outbound payload is schema-valid canonical JSON
    expect(exchanges).toHaveLength(4);
    for (const exchange of exchanges) {
      expectValidPayload(exchange.payload);
    }
    expect(exchanges[3].payload.payload).toEqual({
      type: "quick_reply",
      option_id: "iphone_8_plus",
    });

    // render order equals server order, indicator resolved after each turn
    expect(indicator.classList.contains("visible")).toBe(false);
    expect(view.entries()).toEqual([
      { direction: "user", text: "I want to report a damage" },
      { direction: "bot", text: "Sorry to hear that — let's get your claim on file." },
      { direction: "bot", text: "What kind of damage is it?" },
      { direction: "user", text: "it was stolen" },
      { direction: "bot", text: "I noted damage type: theft. Is that right?" },
      { direction: "user", text: "an iphone" },
      { direction: "bot", text: "Which one is yours?" },
      { direction: "user", text: "iPhone 8 Plus" },
      { direction: "bot", text: "Got it: iPhone 8 Plus." },
      { direction: "bot", text: "What phone number can we reach you at?" },
    ]);
  });
});
