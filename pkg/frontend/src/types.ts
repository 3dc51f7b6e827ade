// Wire types for the assignment service API. Field names match the JSON
// payloads exactly; keep them in sync with the service, never reshape here.

export interface LabelSpec {
    id: string;
    name: string;
    template?: string;
    description_terms?: string[];
    seed_doc_ids?: string[];
}

export type JobStatus = "running" | "done" | "failed";

export interface JobView {
    job_id: string;
    status: JobStatus;
    stage: string;
    mode: string;
    p: number | null;
    message?: string;
}

export interface SessionJobBadge {
    status: "idle" | "running" | "done" | "failed";
    job_id?: string;
    stage?: string;
    message?: string;
}

export interface SessionSummary {
    id: string;
    n_documents: number;
    n_labels: number;
    labels_version: number;
    latest_job_id: string | null;
    job: SessionJobBadge;
}

export interface SessionDetail extends SessionSummary {
    labels: LabelSpec[];
}

export interface DocumentHit {
    id: string;
    text: string;
    gold_label: string | null;
}

export interface DocumentSearchResponse {
    documents: DocumentHit[];
    total_documents: number;
}

export interface ResultEntry {
    id: string;
    text: string;
    gold_label: string | null;
    confidence: number;
}

export interface ResultGroup {
    label_id: string;
    label_name: string;
    documents: ResultEntry[];
}

export interface ResultsSnapshot {
    job_id: string;
    mode: string;
    p: number | null;
    groups: ResultGroup[];
    unassigned: ResultEntry[];
    metrics: Record<string, number> | null;
}

export interface PutLabelsResponse {
    labels: LabelSpec[];
    labels_version: number;
}

export interface AssignRequest {
    mode: "complete" | "partial";
    p?: number;
    cost?: string;
    solver?: Record<string, number>;
    schedule?: Record<string, number>;
}
