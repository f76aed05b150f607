/** Client-side console state with staleness control.
 *
 * Every draft edit bumps `draftRevision`; a server response is only
 * rendered if it was requested for the current revision, so responses for
 * superseded drafts are always dropped regardless of arrival order. */
export function initialState(projectId = "default") {
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
export function updateDraft(state, cpcId, stateName) {
    return {
        ...state,
        draft: { ...state.draft, [cpcId]: stateName },
        draftRevision: state.draftRevision + 1,
        pendingScreen: true,
        error: null,
    };
}
/** Accept a screening response only if it is for the current draft. */
export function acceptScreening(state, revision, response) {
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
export function markFailed(state, revision, message) {
    if (revision !== state.draftRevision) {
        return state;
    }
    return { ...state, pendingScreen: false, error: message };
}
export function draftChoices(state) {
    const out = {};
    for (const [k, v] of Object.entries(state.draft)) {
        out[String(k)] = v;
    }
    return out;
}
