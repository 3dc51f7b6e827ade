// Thin HTTP client for the assignment service. Every method maps to exactly
// one endpoint; no response reshaping happens here so views stay a pure
// function of what the server said.

import type {
    AssignRequest,
    DocumentSearchResponse,
    JobView,
    LabelSpec,
    PutLabelsResponse,
    ResultsSnapshot,
    SessionDetail,
    SessionSummary,
} from "./types.js";

export class ApiError extends Error {
    readonly status: number;
    readonly detail: string;

    constructor(status: number, detail: string) {
        super(`HTTP ${status}: ${detail}`);
        this.name = "ApiError";
        this.status = status;
        this.detail = detail;
    }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
    const response = await fetch(url, init);
    if (!response.ok) {
        let detail = response.statusText;
        try {
            const body = await response.json();
            if (typeof body?.detail === "string") {
                detail = body.detail;
            } else if (body?.detail !== undefined) {
                detail = JSON.stringify(body.detail);
            }
        } catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
}

function jsonInit(method: string, body: unknown): RequestInit {
    return {
        method,
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
    };
}

export class Client {
    readonly baseUrl: string;

    constructor(baseUrl: string) {
        this.baseUrl = baseUrl.replace(/\/+$/, "");
    }

    createSession(corpusJsonl: string): Promise<SessionSummary> {
        return request(`${this.baseUrl}/sessions`, jsonInit("POST", { corpus_jsonl: corpusJsonl }));
    }

    listSessions(): Promise<{ sessions: SessionSummary[] }> {
        return request(`${this.baseUrl}/sessions`);
    }

    getSession(sessionId: string): Promise<SessionDetail> {
        return request(`${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}`);
    }

    searchDocuments(sessionId: string, q: string, limit = 20): Promise<DocumentSearchResponse> {
        const params = new URLSearchParams({ q, limit: String(limit) });
        return request(
            `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/documents?${params}`
        );
    }

    putLabels(sessionId: string, labels: LabelSpec[]): Promise<PutLabelsResponse> {
        return request(
            `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/labels`,
            jsonInit("PUT", labels)
        );
    }

    startAssign(sessionId: string, body: AssignRequest): Promise<JobView> {
        return request(
            `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/assign`,
            jsonInit("POST", body)
        );
    }

    getJob(sessionId: string, jobId: string): Promise<JobView> {
        return request(
            `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/jobs/${encodeURIComponent(jobId)}`
        );
    }

    getResults(sessionId: string, jobId?: string): Promise<ResultsSnapshot> {
        const suffix = jobId ? `?job_id=${encodeURIComponent(jobId)}` : "";
        return request(
            `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/results${suffix}`
        );
    }
}
