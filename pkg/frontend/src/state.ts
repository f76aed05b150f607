/** Client-side console state with staleness control.
 *
 * Every draft edit bumps `draftRevision`; a server response is only
 * rendered if it was requested for the current revision, so responses for
 * superseded drafts are always dropped regardless of arrival order. */

import type { AnalysisResponse, ScreeningResponse, WhatIfDelta } from "./api.js";

export interface ConsoleState {
  projectId: string;
  draft: Record<number, string>;
  draftRevision: number;
  screening: ScreeningResponse | null;
  screeningRevision: number; // revision the rendered screening belongs to
  analysis: AnalysisResponse | null;
  sweep: WhatIfDelta[] | null;
  pendingScreen: boolean;
  error: string | null;
}

export function initialState(projectId = "default"): ConsoleState {
  return {
    projectId,
    draft: {},
    draftRevision: 0,
    screening: null,
    screeningRevision: -1,
    analysis: null,
    sweep: null,
    pendingScreen: false,
    error: null,
  };
}

export function updateDraft(state: ConsoleState, cpcId: number,
                            stateName: string): ConsoleState {
  return {
    ...state,
    draft: { ...state.draft, [cpcId]: stateName },
    draftRevision: state.draftRevision + 1,
    pendingScreen: true,
    error: null,
  };
}

/** Accept a screening response only if it is for the current draft. */
export function acceptScreening(state: ConsoleState, revision: number,
                                response: ScreeningResponse): ConsoleState {
  if (revision !== state.draftRevision) {
    return state; // stale; never rendered
  }
  return {
    ...state,
    screening: response,
    screeningRevision: revision,
    pendingScreen: false,
  };
}

export function markFailed(state: ConsoleState, revision: number,
                           message: string): ConsoleState {
  if (revision !== state.draftRevision) {
    return state;
  }
  return { ...state, pendingScreen: false, error: message };
}

export function draftChoices(state: ConsoleState): Record<string, string> {
  const out: Record<string, string> = {};
  for (const [k, v] of Object.entries(state.draft)) {
    out[String(k)] = v;
  }
  return out;
}
