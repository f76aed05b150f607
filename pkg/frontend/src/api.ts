/** Typed client for the creamkit HTTP API. The console never computes
 * CREAM values itself; every displayed number comes from these responses. */

export type EffectName = "Improve" | "Neutral" | "Reduce";

export interface CpcState {
  name: string;
  effect: EffectName;
}

export interface CpcDefinition {
  id: number;
  name: string;
  description: string;
  states: CpcState[];
}

export interface TaxonomyDoc {
  version: string;
  cpcs: CpcDefinition[];
  control_modes: { id: string; hep_lower: number; hep_upper: number }[];
}

export interface ScreeningResponse {
  score: { reduce: number; neutral: number; improve: number };
  mode: string;
  interval: [number, number];
}

export interface AssignmentRow {
  node: string;
  function: string;
  cff: string;
  nominal: number;
  adjusted_cfp: number;
  source: "override" | "computed";
}

export interface AnalysisResponse {
  per_assignment: AssignmentRow[];
  profile: Record<string, number>;
  aggregate_failure_p: number;
  screening: ScreeningResponse;
}

export interface WhatIfDelta {
  cpc_id: number;
  from_state: string;
  to_state: string;
  mode_before: string;
  mode_after: string;
  aggregate_before: number;
  aggregate_after: number;
  interval_before: [number, number];
  interval_after: [number, number];
}

export interface ProjectDoc {
  id: string;
  revision: number;
  notes: string;
  hta: unknown;
  assessments: { name: string; label: string; choices: Record<string, string> }[];
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface AssessmentBody {
  label: string;
  choices: Record<string, string>;
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string,
              public details: string[] = []) {
    super(message);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body.code ?? "error",
                       body.message ?? resp.statusText, body.details ?? []);
  }
  return body as T;
}

export class ApiClient {
  constructor(private fetchImpl: FetchLike = (i, o) => fetch(i, o),
              private base = "") {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  getTaxonomy(): Promise<TaxonomyDoc> {
    return this.fetchImpl(this.base + "/api/taxonomy")
      .then((r) => asJson<TaxonomyDoc>(r));
  }

  screen(assessment: AssessmentBody): Promise<ScreeningResponse> {
    return this.post("/api/screening", { assessment });
  }

  analyze(hta: string, assessment: AssessmentBody): Promise<AnalysisResponse> {
    return this.post("/api/analysis", { hta, assessment });
  }

  whatIf(hta: string, assessment: AssessmentBody): Promise<{ deltas: WhatIfDelta[] }> {
    return this.post("/api/whatif", { hta, assessment });
  }

  getProject(id: string): Promise<ProjectDoc> {
    return this.fetchImpl(this.base + `/api/projects/${id}`)
      .then((r) => asJson<ProjectDoc>(r));
  }

  putProject(id: string, doc: Omit<ProjectDoc, "id">): Promise<ProjectDoc> {
    return this.fetchImpl(this.base + `/api/projects/${id}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    }).then((r) => asJson<ProjectDoc>(r));
  }
}
