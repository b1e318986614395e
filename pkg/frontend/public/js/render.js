/**
 * DOM rendering for the workbench. All span math lives in highlight.ts and
 * all decision logic in model.ts; this module only materializes their
 * output and wires events. Keyboard-first: annotators work through
 * hundreds of phrases, so every action has a key.
 */
import { debateSegments } from "./highlight.js";
import { DecisionError, buildDecision, decisionStates, independentDecisions, verdictLabel, } from "./model.js";
const GUIDELINES = [
    "Pick the mentioned entity from the candidate list, or paste one or more URLs.",
    "Adjectively used names should be linked; metaphorical speech and pronouns should not.",
    "Use “not in KB” when the referent exists but no knowledge base has it.",
    "Use “do not annotate” when the phrase should not have been highlighted at all.",
];
const KEY_HELP = "keys: n/p next/prev phrase · 1-9 toggle candidate · u focus URL box · " +
    "x not in KB · d do not annotate · Enter submit picks";
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
export class Workbench {
    api;
    annotatorId;
    round;
    debate = null;
    phrases = [];
    decisions = new Map();
    gold = [];
    selected = 0;
    picked = new Set();
    root;
    constructor(api, root, annotatorId, round) {
        this.api = api;
        this.annotatorId = annotatorId;
        this.round = round;
        this.root = root;
        document.addEventListener("keydown", (event) => this.onKey(event));
    }
    async start() {
        try {
            const debates = await this.api.debates();
            this.renderDebateList(debates);
        }
        catch (err) {
            this.renderError(err);
        }
    }
    renderError(err) {
        this.root.replaceChildren();
        const banner = el("div", "panel error-banner");
        banner.append(el("h2", undefined, "Cannot render"));
        banner.append(el("p", undefined, err instanceof Error ? err.message : String(err)));
        const retry = el("button", "retry", "reload");
        retry.addEventListener("click", () => void this.start());
        banner.append(retry);
        this.root.append(banner);
    }
    renderDebateList(debates) {
        this.root.replaceChildren();
        const panel = el("div", "panel");
        panel.append(el("h2", undefined, "Debates"));
        const list = el("ul", "debate-list");
        for (const debate of debates) {
            const item = el("li");
            const link = el("a", undefined, `${debate.id} — ${debate.date} (${debate.house})`);
            link.href = "#";
            link.addEventListener("click", (event) => {
                event.preventDefault();
                void this.openDebate(debate.id);
            });
            item.append(link);
            list.append(item);
        }
        panel.append(list);
        this.root.append(panel);
    }
    async openDebate(debateId) {
        try {
            const debate = await this.api.debate(debateId);
            this.debate = debate;
            if (debate.scene_of_interest) {
                const payload = await this.api.phrases(debate.scene_of_interest);
                this.phrases = payload.phrases;
            }
            else {
                this.phrases = [];
            }
            await this.refreshDecisions();
        }
        catch (err) {
            this.renderError(err);
            return;
        }
        this.selected = 0;
        this.picked.clear();
        this.render();
    }
    async refreshDecisions() {
        this.gold = await this.api.exportGold();
        this.decisions = decisionStates(this.phrases, this.gold, this.round);
    }
    selectedPhrase() {
        return this.phrases[this.selected];
    }
    // ----- submission -------------------------------------------------------
    async submit(input) {
        const phrase = this.selectedPhrase();
        if (!phrase)
            return;
        let record;
        try {
            record = buildDecision(phrase.phrase_id, input, this.annotatorId, this.round);
        }
        catch (err) {
            if (err instanceof DecisionError) {
                this.setStatus(err.message, "error");
                return;
            }
            throw err;
        }
        const result = await this.api.submitDecision(record);
        await this.handleResult(result, input);
    }
    async handleResult(result, input) {
        if (result.ok) {
            await this.refreshDecisions();
            this.picked.clear();
            this.advance(1);
            this.render();
            this.setStatus("saved", "ok");
            return;
        }
        // failed: state unchanged, offer retry on transport errors
        this.render();
        if (result.retryable) {
            this.setStatus(`${result.error} — not saved`, "error", () => {
                void this.submit(input);
            });
        }
        else {
            this.setStatus(result.error, "error");
        }
    }
    // ----- keyboard ---------------------------------------------------------
    onKey(event) {
        if (!this.debate || this.phrases.length === 0)
            return;
        const target = event.target;
        if (target && target.tagName === "INPUT") {
            if (event.key === "Enter") {
                event.preventDefault();
                const box = target;
                void this.submit({ kind: "manual", text: box.value });
                box.value = "";
                box.blur();
            }
            return;
        }
        if (event.key === "n")
            this.advance(1);
        else if (event.key === "p")
            this.advance(-1);
        else if (event.key >= "1" && event.key <= "9") {
            this.togglePick(Number(event.key) - 1);
        }
        else if (event.key === "x")
            void this.submit({ kind: "nil" });
        else if (event.key === "d")
            void this.submit({ kind: "dna" });
        else if (event.key === "u") {
            event.preventDefault();
            this.urlBox()?.focus();
        }
        else if (event.key === "Enter") {
            void this.submit({ kind: "pick", uris: [...this.picked] });
        }
        else {
            return;
        }
        if (event.key !== "u")
            this.render();
    }
    advance(step) {
        if (this.phrases.length === 0)
            return;
        this.selected =
            (this.selected + step + this.phrases.length) % this.phrases.length;
        this.picked.clear();
    }
    togglePick(index) {
        const phrase = this.selectedPhrase();
        const candidate = phrase?.candidates[index];
        if (!candidate)
            return;
        if (this.picked.has(candidate.uri))
            this.picked.delete(candidate.uri);
        else
            this.picked.add(candidate.uri);
    }
    urlBox() {
        return this.root.querySelector("#manual-url");
    }
    // ----- rendering --------------------------------------------------------
    setStatus(text, kind, retry) {
        const bar = this.root.querySelector("#status");
        if (!bar)
            return;
        bar.replaceChildren();
        bar.append(el("span", `status-${kind}`, text));
        if (retry) {
            const button = el("button", "retry", "retry");
            button.addEventListener("click", retry);
            bar.append(button);
        }
    }
    render() {
        const debate = this.debate;
        if (!debate)
            return;
        this.root.replaceChildren();
        const header = el("div", "panel header");
        header.append(el("h2", undefined, `${debate.id} — ${debate.date} (${debate.house})`));
        const decided = [...this.decisions.values()].filter(Boolean).length;
        header.append(el("p", "progress", `${decided} / ${this.phrases.length} phrases decided`));
        header.append(el("p", "keys", KEY_HELP));
        const status = el("div");
        status.id = "status";
        header.append(status);
        this.root.append(header);
        this.root.append(this.renderText(debateSegments(debate, this.phrases)));
        this.root.append(this.renderSidebar());
    }
    renderText(scenes) {
        const container = el("div", "panel debate-text");
        const selectedId = this.selectedPhrase()?.phrase_id;
        for (const scene of scenes) {
            const block = el("div", scene.isSceneOfInterest ? "scene scene-of-interest" : "scene");
            block.append(el("div", "scene-label", scene.isSceneOfInterest ? `${scene.sceneId} (scene of interest)` : scene.sceneId));
            const body = el("p");
            for (const segment of scene.segments) {
                if (segment.kind === "plain") {
                    body.append(document.createTextNode(segment.text));
                    continue;
                }
                const phraseId = segment.phraseId ?? "";
                const mark = el("mark", "phrase", segment.text);
                const decision = this.decisions.get(phraseId);
                if (decision)
                    mark.classList.add("decided");
                if (phraseId === selectedId)
                    mark.classList.add("selected");
                mark.addEventListener("click", () => {
                    this.selected = this.phrases.findIndex((p) => p.phrase_id === phraseId);
                    this.picked.clear();
                    this.render();
                });
                body.append(mark);
            }
            block.append(body);
            container.append(block);
        }
        return container;
    }
    renderSidebar() {
        const side = el("div", "panel sidebar");
        const phrase = this.selectedPhrase();
        if (!phrase) {
            side.append(el("p", undefined, "No phrases in the scene of interest."));
            return side;
        }
        side.append(el("h3", undefined, `“${phrase.surface}”`));
        const decision = this.decisions.get(phrase.phrase_id);
        if (decision) {
            side.append(el("p", "decided-as", `decided: ${verdictLabel(decision.verdict)}` +
                (decision.uris.length ? ` → ${decision.uris.join(", ")}` : "")));
        }
        if (this.round === "consensus") {
            const independents = independentDecisions(phrase.phrase_id, this.gold);
            if (independents.length > 0) {
                const box = el("div", "independent-round");
                box.append(el("h4", undefined, "Independent round"));
                for (const record of independents) {
                    box.append(el("p", "independent-decision", `${record.annotator_id}: ${verdictLabel(record.verdict)}` +
                        (record.uris.length ? ` → ${record.uris.join(", ")}` : "")));
                }
                side.append(box);
            }
        }
        const list = el("ol", "candidates");
        phrase.candidates.forEach((candidate, index) => {
            const item = el("li");
            const button = el("button", this.picked.has(candidate.uri) ? "candidate picked" : "candidate", `${index + 1}. ${candidate.display_name} (${candidate.kind})`);
            button.title = candidate.uri;
            button.addEventListener("click", () => {
                this.togglePick(index);
                this.render();
            });
            item.append(button);
            list.append(item);
        });
        side.append(list);
        const submitPick = el("button", "action", "submit picks (Enter)");
        submitPick.addEventListener("click", () => void this.submit({ kind: "pick", uris: [...this.picked] }));
        side.append(submitPick);
        const urlBox = el("input");
        urlBox.id = "manual-url";
        urlBox.placeholder = "paste one or more URLs, Enter to save (u)";
        side.append(urlBox);
        const nilButton = el("button", "action", "not in KB (x)");
        nilButton.addEventListener("click", () => void this.submit({ kind: "nil" }));
        const dnaButton = el("button", "action", "do not annotate (d)");
        dnaButton.addEventListener("click", () => void this.submit({ kind: "dna" }));
        side.append(nilButton, dnaButton);
        const help = el("div", "guidelines");
        help.append(el("h4", undefined, "Guidelines"));
        const lines = el("ul");
        for (const line of GUIDELINES) {
            lines.append(el("li", undefined, line));
        }
        help.append(lines);
        side.append(help);
        return side;
    }
}
