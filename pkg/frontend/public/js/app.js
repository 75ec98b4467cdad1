import { ChatClient } from "./client.js";
import { loadSession } from "./messages.js";
import { ChatView } from "./view.js";
function boot() {
    const root = document.getElementById("chat-root");
    if (!root) {
        throw new Error("missing #chat-root");
    }
    const view = new ChatView(root, new ChatClient(""), loadSession(window.localStorage));
    view.mount();
}
if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", boot);
}
else {
    boot();
}
