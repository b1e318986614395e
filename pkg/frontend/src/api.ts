/**
 * Typed client for the annotation service. The fetch implementation is
 * injectable so the logic is testable without a browser or a server;
 * network failures surface as retryable results, never as silent loss.
 */

import type {
  DebateSummary,
  DebateView,
  GoldRecord,
  PhraseView,
  Progress,
} from "./model.js";
import { parseGoldExport } from "./model.js";

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export interface ScenePhrases {
  scene_id: string;
  debate_id: string;
  phrases: PhraseView[];
}

export type SubmitResult =
  | { ok: true; decision: GoldRecord }
  | { ok: false; status: number | null; error: string; retryable: boolean };

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path);
    if (!response.ok) {
      throw new ApiError(`GET ${path} failed (${response.status})`, response.status);
    }
    return (await response.json()) as T;
  }

  async debates(): Promise<DebateSummary[]> {
    const payload = await this.getJson<{ debates: DebateSummary[] }>("/debates");
    return payload.debates;
  }

  async debate(id: string): Promise<DebateView> {
    return this.getJson<DebateView>(`/debates/${encodeURIComponent(id)}`);
  }

  async phrases(sceneId: string): Promise<ScenePhrases> {
    return this.getJson<ScenePhrases>(
      `/scenes/${encodeURIComponent(sceneId)}/phrases`,
    );
  }

  async progress(): Promise<Progress> {
    return this.getJson<Progress>("/progress");
  }

  async exportGold(): Promise<GoldRecord[]> {
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
  async submitDecision(record: GoldRecord): Promise<SubmitResult> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + "/gold", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(record),
      });
    } catch (err) {
      return {
        ok: false,
        status: null,
        error: err instanceof Error ? err.message : String(err),
        retryable: true,
      };
    }
    let body: { decision?: GoldRecord; error?: string } = {};
    try {
      body = (await response.json()) as typeof body;
    } catch {
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
