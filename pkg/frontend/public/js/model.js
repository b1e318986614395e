/**
 * Payload types mirroring the annotation service's JSON resources, plus the
 * pure decision-building logic the UI and its tests share.
 */
export class DecisionError extends Error {
}
/** Manual entry accepts several URLs separated by whitespace or commas. */
export function splitManualUrls(text) {
    return text
        .split(/[\s,]+/)
        .map((part) => part.trim())
        .filter((part) => part.length > 0);
}
/**
 * Turn a UI action into the exact record POST /gold expects. The server
 * re-validates, but rejecting impossible decisions here keeps the
 * round trip honest (a link without URIs never leaves the client).
 */
export function buildDecision(phraseId, input, annotatorId, round) {
    if (!annotatorId) {
        throw new DecisionError("annotator id is required");
    }
    let verdict;
    let uris;
    switch (input.kind) {
        case "pick":
            verdict = "link";
            uris = [...new Set(input.uris)];
            if (uris.length === 0) {
                throw new DecisionError("pick at least one candidate");
            }
            break;
        case "manual":
            verdict = "link";
            uris = [...new Set(splitManualUrls(input.text))];
            if (uris.length === 0) {
                throw new DecisionError("enter at least one URL");
            }
            break;
        case "nil":
            verdict = "nil_not_in_kb";
            uris = [];
            break;
        case "dna":
            verdict = "do_not_annotate";
            uris = [];
            break;
    }
    return { phrase_id: phraseId, verdict, uris, annotator_id: annotatorId, round };
}
/**
 * Decision state per phrase, reconstructed from the exported gold log.
 * The UI never keeps client-only state that matters: this projection of
 * GET /export/gold is the single source of truth for "decided".
 */
export function decisionStates(phrases, gold, round = "consensus") {
    const byPhrase = new Map();
    for (const phrase of phrases) {
        byPhrase.set(phrase.phrase_id, undefined);
    }
    for (const record of gold) {
        if (record.round === round && byPhrase.has(record.phrase_id)) {
            byPhrase.set(record.phrase_id, record); // latest wins
        }
    }
    return byPhrase;
}
/**
 * Latest independent-round decision per annotator for one phrase, in
 * annotator order: the consensus view shows these side by side so
 * disagreements are visible while deciding.
 */
export function independentDecisions(phraseId, gold) {
    const byAnnotator = new Map();
    for (const record of gold) {
        if (record.round === "independent" && record.phrase_id === phraseId) {
            byAnnotator.set(record.annotator_id, record);
        }
    }
    return [...byAnnotator.keys()].sort().map((id) => byAnnotator.get(id));
}
export function parseGoldExport(text) {
    const records = [];
    for (const line of text.split("\n")) {
        if (line.trim().length === 0)
            continue;
        records.push(JSON.parse(line));
    }
    return records;
}
export function verdictLabel(verdict) {
    switch (verdict) {
        case "link":
            return "linked";
        case "nil_not_in_kb":
            return "not in any KB";
        case "do_not_annotate":
            return "do not annotate";
    }
}
