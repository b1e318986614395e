/**
 * Span segmentation: turns scene text plus phrase spans into a flat list of
 * render segments. Offsets count Unicode code points, exactly as the
 * backend measures them, so the text is split with Array.from rather than
 * UTF-16 indices.
 */

import type { DebateView, PhraseView } from "./model.js";

export interface Segment {
  kind: "plain" | "phrase";
  text: string;
  phraseId?: string;
}

export interface SceneSegments {
  sceneId: string;
  isSceneOfInterest: boolean;
  segments: Segment[];
}

interface SpanLike {
  phrase_id: string;
  start: number;
  end: number;
}

/**
 * Pooled phrases never overlap within a scene; if a malformed payload
 * disagrees, later overlapping spans are skipped rather than rendered
 * twice (the spans themselves are never altered).
 */
export function segmentText(text: string, spans: SpanLike[]): Segment[] {
  const chars = Array.from(text);
  const ordered = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const segments: Segment[] = [];
  let pos = 0;
  for (const span of ordered) {
    if (span.start < pos || span.end <= span.start || span.end > chars.length) {
      continue;
    }
    if (span.start > pos) {
      segments.push({ kind: "plain", text: chars.slice(pos, span.start).join("") });
    }
    segments.push({
      kind: "phrase",
      text: chars.slice(span.start, span.end).join(""),
      phraseId: span.phrase_id,
    });
    pos = span.end;
  }
  if (pos < chars.length) {
    segments.push({ kind: "plain", text: chars.slice(pos).join("") });
  }
  return segments;
}

/**
 * The whole debate is shown, but only the scene of interest carries
 * highlights; every other scene renders as one plain segment.
 */
export function debateSegments(
  debate: DebateView,
  phrases: PhraseView[],
): SceneSegments[] {
  return debate.scenes.map((scene) => {
    const isSceneOfInterest = scene.id === debate.scene_of_interest;
    return {
      sceneId: scene.id,
      isSceneOfInterest,
      segments: isSceneOfInterest
        ? segmentText(scene.text, phrases)
        : [{ kind: "plain" as const, text: scene.text }],
    };
  });
}

export function highlightCount(scenes: SceneSegments[]): number {
  let count = 0;
  for (const scene of scenes) {
    for (const segment of scene.segments) {
      if (segment.kind === "phrase") count += 1;
    }
  }
  return count;
}
