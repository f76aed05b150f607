/** Analyst console: CPC assessment panel, live control-mode gauge,
 * what-if table and demand-profile chart, all driven by API responses. */
import { ApiError } from "./api.js";
import { acceptScreening, draftChoices, initialState, markFailed, updateDraft, } from "./state.js";
const EFFECT_BADGE = {
    Improve: "+", Neutral: "0", Reduce: "−",
};
const FUNCTION_ORDER = ["Observation", "Interpretation", "Planning", "Execution"];
export class Console {
    constructor(root, api, projectId = "default") {
        this.root = root;
        this.api = api;
        this.taxonomy = null;
        this.htaText = "";
        this.state = initialState(projectId);
    }
    async init() {
        this.root.innerHTML = `
      <header><h1>creamkit analyst console</h1></header>
      <section id="panel"><p class="notice">Loading taxonomy…</p></section>
      <section id="gauge" aria-live="polite"></section>
      <section id="hta">
        <h2>Task analysis</h2>
        <textarea id="hta-text" rows="8" spellcheck="false"
          placeholder="Paste .hta content, then Analyze"></textarea>
        <div>
          <button id="analyze-btn">Analyze</button>
          <button id="whatif-btn">What-if sweep</button>
          <button id="save-btn">Save project</button>
        </div>
      </section>
      <section id="profile"></section>
      <section id="whatif"></section>
      <section id="errors" role="alert"></section>`;
        this.byId("analyze-btn").addEventListener("click", () => this.runAnalysis());
        this.byId("whatif-btn").addEventListener("click", () => this.runWhatIf());
        this.byId("save-btn").addEventListener("click", () => this.saveProject());
        this.byId("hta-text").addEventListener("input", (ev) => {
            this.htaText = ev.target.value;
        });
        try {
            this.taxonomy = await this.api.getTaxonomy();
        }
        catch (err) {
            this.renderPanelError(String(err));
            return;
        }
        this.renderAssessmentPanel(this.taxonomy);
        if (this.taxonomy.cpcs.length > 0) {
            await this.refreshScreening();
        }
    }
    // -- assessment panel ----------------------------------------------------
    renderAssessmentPanel(taxonomy) {
        const panel = this.byId("panel");
        if (taxonomy.cpcs.length === 0) {
            panel.innerHTML = '<p class="notice">Taxonomy has no CPCs.</p>';
            return;
        }
        panel.innerHTML = "<h2>Working context</h2>";
        for (const cpc of taxonomy.cpcs) {
            if (!(cpc.id in this.state.draft)) {
                this.state.draft[cpc.id] = cpc.states[0].name;
            }
            panel.appendChild(this.cpcSelector(cpc));
        }
    }
    cpcSelector(cpc) {
        const row = document.createElement("div");
        row.className = "cpc-row";
        const label = document.createElement("label");
        label.htmlFor = `cpc-${cpc.id}`;
        label.textContent = `${cpc.id}. ${cpc.name}`;
        label.title = cpc.description;
        const select = document.createElement("select");
        select.id = `cpc-${cpc.id}`;
        select.dataset.cpcId = String(cpc.id);
        for (const st of cpc.states) {
            const opt = document.createElement("option");
            opt.value = st.name;
            opt.textContent = `${st.name} (${EFFECT_BADGE[st.effect]})`;
            opt.dataset.effect = st.effect;
            if (st.name === this.state.draft[cpc.id]) {
                opt.selected = true;
            }
            select.appendChild(opt);
        }
        select.addEventListener("change", () => {
            void this.onStateChange(cpc.id, select.value);
        });
        const desc = document.createElement("p");
        desc.className = "cpc-desc";
        desc.textContent = cpc.description;
        row.append(label, select, desc);
        return row;
    }
    renderPanelError(message) {
        const panel = this.byId("panel");
        panel.innerHTML = "";
        const notice = document.createElement("p");
        notice.className = "notice error";
        notice.textContent = `Could not load taxonomy: ${message}`;
        const retry = document.createElement("button");
        retry.id = "retry-taxonomy";
        retry.textContent = "Retry";
        retry.addEventListener("click", () => void this.init());
        panel.append(notice, retry);
    }
    // -- screening loop ------------------------------------------------------
    async onStateChange(cpcId, stateName) {
        this.state = updateDraft(this.state, cpcId, stateName);
        await this.refreshScreening();
    }
    async refreshScreening() {
        const revision = this.state.draftRevision;
        this.renderGauge();
        try {
            const response = await this.api.screen({
                label: `draft-${revision}`,
                choices: draftChoices(this.state),
            });
            this.state = acceptScreening(this.state, revision, response);
        }
        catch (err) {
            const message = err instanceof ApiError ? err.message : String(err);
            this.state = markFailed(this.state, revision, message);
        }
        this.renderGauge();
        this.renderErrors();
    }
    renderGauge() {
        const gauge = this.byId("gauge");
        const s = this.state.screening;
        if (s === null) {
            gauge.innerHTML = '<p class="notice">No screening yet.</p>';
            return;
        }
        const stale = this.state.screeningRevision !== this.state.draftRevision;
        gauge.innerHTML = `
      <h2>Control mode</h2>
      <p class="mode${stale ? " stale" : ""}">
        <strong id="gauge-mode">${s.mode}</strong>
        <span id="gauge-interval">[${s.interval[0]}, ${s.interval[1]}]</span>
      </p>
      <p id="gauge-score">reduce ${s.score.reduce} / neutral ${s.score.neutral}
        / improve ${s.score.improve}</p>`;
    }
    // -- analysis and profile chart ------------------------------------------
    async runAnalysis() {
        if (!this.htaText.trim()) {
            this.showError("Paste an HTA document first.");
            return;
        }
        try {
            const analysis = await this.api.analyze(this.htaText, {
                label: "console", choices: draftChoices(this.state),
            });
            this.state = { ...this.state, analysis, error: null };
        }
        catch (err) {
            this.showError(err instanceof ApiError
                ? `${err.message}: ${err.details.join("; ")}` : String(err));
            return;
        }
        this.renderProfileChart(this.state.analysis);
        this.renderErrors();
    }
    renderProfileChart(analysis) {
        const section = this.byId("profile");
        const counts = FUNCTION_ORDER.map((fn) => analysis.profile[fn] ?? 0);
        const max = Math.max(1, ...counts);
        const rows = FUNCTION_ORDER.map((fn, i) => {
            const width = Math.round((counts[i] / max) * 300);
            return `<div class="bar-row" data-function="${fn}">
        <span class="bar-label">${fn}</span>
        <span class="bar" data-count="${counts[i]}"
          style="width:${width}px"></span>
        <span class="bar-count">${counts[i]}</span>
      </div>`;
        });
        section.innerHTML = `<h2>Cognitive demand profile</h2>
      ${rows.join("\n")}
      <p>Aggregate failure probability:
        <span id="aggregate">${analysis.aggregate_failure_p.toExponential(6)}</span></p>`;
    }
    // -- what-if -------------------------------------------------------------
    async runWhatIf() {
        if (!this.htaText.trim()) {
            this.showError("Paste an HTA document first.");
            return;
        }
        try {
            const { deltas } = await this.api.whatIf(this.htaText, {
                label: "console", choices: draftChoices(this.state),
            });
            this.state = { ...this.state, sweep: deltas, error: null };
        }
        catch (err) {
            this.showError(err instanceof ApiError ? err.message : String(err));
            return;
        }
        this.renderWhatIfTable(this.state.sweep);
        this.renderErrors();
    }
    renderWhatIfTable(deltas) {
        const section = this.byId("whatif");
        const improving = deltas.filter((d) => d.aggregate_after < d.aggregate_before);
        let html = "<h2>What-if: single-CPC changes</h2>";
        if (improving.length === 0) {
            html += '<p class="notice" id="no-improvement">No strict improvement available.</p>';
        }
        html += `<table><thead><tr>
      <th>CPC</th><th>From</th><th>To</th><th>Mode after</th>
      <th>Aggregate after</th></tr></thead><tbody>`;
        for (const d of deltas) {
            html += `<tr class="whatif-row" data-cpc="${d.cpc_id}"
        data-to="${escapeAttr(d.to_state)}">
        <td>${d.cpc_id}</td><td>${escapeHtml(d.from_state)}</td>
        <td>${escapeHtml(d.to_state)}</td><td>${d.mode_after}</td>
        <td>${d.aggregate_after.toExponential(6)}</td></tr>`;
        }
        html += "</tbody></table>";
        section.innerHTML = html;
        for (const row of section.querySelectorAll(".whatif-row")) {
            row.addEventListener("click", () => {
                const cpcId = Number(row.dataset.cpc);
                const toState = row.dataset.to;
                const select = this.root.querySelector(`#cpc-${cpcId}`);
                if (select) {
                    select.value = toState;
                }
                void this.onStateChange(cpcId, toState);
            });
        }
    }
    // -- persistence ---------------------------------------------------------
    async saveProject() {
        try {
            const existing = await this.api.getProject(this.state.projectId)
                .catch((err) => {
                if (err instanceof ApiError && err.status === 404)
                    return null;
                throw err;
            });
            await this.api.putProject(this.state.projectId, {
                revision: existing?.revision ?? 0,
                notes: existing?.notes ?? "",
                hta: existing?.hta ?? { roots: [] },
                assessments: [{
                        name: "console-draft", label: "console draft",
                        choices: draftChoices(this.state),
                    }],
            });
            this.state = { ...this.state, error: null };
        }
        catch (err) {
            this.showError(err instanceof ApiError ? err.message : String(err));
        }
        this.renderErrors();
    }
    // -- helpers -------------------------------------------------------------
    showError(message) {
        this.state = { ...this.state, error: message };
        this.renderErrors();
    }
    renderErrors() {
        const box = this.byId("errors");
        box.innerHTML = this.state.error
            ? `<p class="notice error">${escapeHtml(this.state.error)}</p>` : "";
    }
    byId(id) {
        const el = this.root.querySelector(`#${id}`);
        if (!el)
            throw new Error(`missing element #${id}`);
        return el;
    }
}
function escapeHtml(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
        .replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}
function escapeAttr(text) {
    return escapeHtml(text);
}
