/** Typed client for the creamkit HTTP API. The console never computes
 * CREAM values itself; every displayed number comes from these responses. */
export class ApiError extends Error {
    constructor(status, code, message, details = []) {
        super(message);
        this.status = status;
        this.code = code;
        this.details = details;
    }
}
async function asJson(resp) {
    const body = await resp.json();
    if (!resp.ok) {
        throw new ApiError(resp.status, body.code ?? "error", body.message ?? resp.statusText, body.details ?? []);
    }
    return body;
}
export class ApiClient {
    constructor(fetchImpl = (i, o) => fetch(i, o), base = "") {
        this.fetchImpl = fetchImpl;
        this.base = base;
    }
    post(path, body) {
        return this.fetchImpl(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        }).then((r) => asJson(r));
    }
    getTaxonomy() {
        return this.fetchImpl(this.base + "/api/taxonomy")
            .then((r) => asJson(r));
    }
    screen(assessment) {
        return this.post("/api/screening", { assessment });
    }
    analyze(hta, assessment) {
        return this.post("/api/analysis", { hta, assessment });
    }
    whatIf(hta, assessment) {
        return this.post("/api/whatif", { hta, assessment });
    }
    getProject(id) {
        return this.fetchImpl(this.base + `/api/projects/${id}`)
            .then((r) => asJson(r));
    }
    putProject(id, doc) {
        return this.fetchImpl(this.base + `/api/projects/${id}`, {
            method: "PUT",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(doc),
        }).then((r) => asJson(r));
    }
}
