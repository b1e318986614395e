/**
 * Typed client for the annotation service. The fetch implementation is
 * injectable so the logic is testable without a browser or a server;
 * network failures surface as retryable results, never as silent loss.
 */
import { parseGoldExport } from "./model.js";
export class ApiError extends Error {
    status;
    constructor(message, status) {
        super(message);
        this.status = status;
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (...args) => fetch(...args)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async getJson(path) {
        const response = await this.fetchFn(this.baseUrl + path);
        if (!response.ok) {
            throw new ApiError(`GET ${path} failed (${response.status})`, response.status);
        }
        return (await response.json());
    }
    async debates() {
        const payload = await this.getJson("/debates");
        return payload.debates;
    }
    async debate(id) {
        return this.getJson(`/debates/${encodeURIComponent(id)}`);
    }
    async phrases(sceneId) {
        return this.getJson(`/scenes/${encodeURIComponent(sceneId)}/phrases`);
    }
    async progress() {
        return this.getJson("/progress");
    }
    async exportGold() {
        const response = await this.fetchFn(this.baseUrl + "/export/gold");
        if (!response.ok) {
            throw new ApiError(`export failed (${response.status})`, response.status);
        }
        return parseGoldExport(await response.text());
    }
    /**
     * POST one decision. 200 becomes {ok: true}; 4xx/409 become non-retryable
     * failures carrying the server's message; transport errors are retryable.
     */
    async submitDecision(record) {
        let response;
        try {
            response = await this.fetchFn(this.baseUrl + "/gold", {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify(record),
            });
        }
        catch (err) {
            return {
                ok: false,
                status: null,
                error: err instanceof Error ? err.message : String(err),
                retryable: true,
            };
        }
        let body = {};
        try {
            body = (await response.json());
        }
        catch {
            // non-JSON error body: fall through with the status line only
        }
        if (response.ok && body.decision) {
            return { ok: true, decision: body.decision };
        }
        return {
            ok: false,
            status: response.status,
            error: body.error ?? `HTTP ${response.status}`,
            retryable: response.status >= 500,
        };
    }
}
