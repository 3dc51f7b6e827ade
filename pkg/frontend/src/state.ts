// Pure state transitions for the label editor and the run/inspect screen.
// Nothing in this module touches the DOM or the network; every view is a
// plain function of the last service responses plus the local edit buffer.

import type {
    JobView,
    LabelSpec,
    ResultEntry,
    ResultsSnapshot,
} from "./types.js";

// ---------------------------------------------------------------- label editor

export interface LabelEditorState {
    saved: LabelSpec[];
    working: LabelSpec[];
    dirty: boolean;
    messages: string[];
    warnings: string[];
}

function cloneSpec(spec: LabelSpec): LabelSpec {
    const copy: LabelSpec = { id: spec.id, name: spec.name };
    if (spec.template !== undefined) copy.template = spec.template;
    if (spec.description_terms !== undefined) copy.description_terms = [...spec.description_terms];
    if (spec.seed_doc_ids !== undefined) copy.seed_doc_ids = [...spec.seed_doc_ids];
    return copy;
}

function normalizeSpec(spec: LabelSpec): Record<string, unknown> {
    return {
        id: spec.id,
        name: spec.name,
        template: spec.template ?? null,
        description_terms: spec.description_terms ?? [],
        seed_doc_ids: spec.seed_doc_ids ?? [],
    };
}

// dirty is structural: adding a label and removing it again, or renaming and
// renaming back, leaves the editor clean
function specsEqual(a: LabelSpec[], b: LabelSpec[]): boolean {
    if (a.length !== b.length) return false;
    for (let i = 0; i < a.length; i++) {
        if (JSON.stringify(normalizeSpec(a[i])) !== JSON.stringify(normalizeSpec(b[i]))) {
            return false;
        }
    }
    return true;
}

function withWorking(state: LabelEditorState, working: LabelSpec[]): LabelEditorState {
    return {
        saved: state.saved,
        working,
        dirty: !specsEqual(working, state.saved),
        messages: validateLabels(working),
        warnings: state.warnings,
    };
}

export function emptyEditor(): LabelEditorState {
    return { saved: [], working: [], dirty: false, messages: [], warnings: [] };
}

export function editorFromLabels(labels: LabelSpec[]): LabelEditorState {
    return {
        saved: labels.map(cloneSpec),
        working: labels.map(cloneSpec),
        dirty: false,
        messages: [],
        warnings: [],
    };
}

export function slugify(name: string): string {
    const slug = name
        .toLowerCase()
        .replace(/[^a-z0-9]+/g, "-")
        .replace(/^-+|-+$/g, "");
    return slug === "" ? "label" : slug;
}

function freshId(name: string, working: LabelSpec[]): string {
    const base = slugify(name);
    if (!working.some((spec) => spec.id === base)) return base;
    let k = 2;
    while (working.some((spec) => spec.id === `${base}-${k}`)) k++;
    return `${base}-${k}`;
}

export function addLabel(state: LabelEditorState, name: string): LabelEditorState {
    const spec: LabelSpec = { id: freshId(name, state.working), name };
    return withWorking(state, [...state.working.map(cloneSpec), spec]);
}

export function renameLabel(state: LabelEditorState, id: string, name: string): LabelEditorState {
    const working = state.working.map((spec) =>
        spec.id === id ? { ...cloneSpec(spec), name } : cloneSpec(spec)
    );
    return withWorking(state, working);
}

export function removeLabel(
    state: LabelEditorState,
    id: string,
    resultsPresent: boolean
): LabelEditorState {
    const working = state.working.filter((spec) => spec.id !== id).map(cloneSpec);
    const next = withWorking(state, working);
    if (resultsPresent && state.working.some((spec) => spec.id === id)) {
        next.warnings = [
            ...state.warnings,
            `removing "${id}" changes the label count; the next run will regroup every document`,
        ];
    }
    return next;
}

export function setTerms(state: LabelEditorState, id: string, terms: string[]): LabelEditorState {
    const working = state.working.map((spec) => {
        if (spec.id !== id) return cloneSpec(spec);
        const copy = cloneSpec(spec);
        if (terms.length > 0) {
            copy.description_terms = [...terms];
        } else {
            delete copy.description_terms;
        }
        return copy;
    });
    return withWorking(state, working);
}

// seed documents enter the spec only through an explicit confirmation per
// document; search hits alone never mutate the working list
export function confirmSeedDoc(state: LabelEditorState, id: string, docId: string): LabelEditorState {
    const working = state.working.map((spec) => {
        if (spec.id !== id) return cloneSpec(spec);
        const copy = cloneSpec(spec);
        const seeds = copy.seed_doc_ids ?? [];
        if (!seeds.includes(docId)) {
            copy.seed_doc_ids = [...seeds, docId];
        }
        return copy;
    });
    return withWorking(state, working);
}

export function unconfirmSeedDoc(
    state: LabelEditorState,
    id: string,
    docId: string
): LabelEditorState {
    const working = state.working.map((spec) => {
        if (spec.id !== id) return cloneSpec(spec);
        const copy = cloneSpec(spec);
        const seeds = (copy.seed_doc_ids ?? []).filter((existing) => existing !== docId);
        if (seeds.length > 0) {
            copy.seed_doc_ids = seeds;
        } else {
            delete copy.seed_doc_ids;
        }
        return copy;
    });
    return withWorking(state, working);
}

export function markSaved(state: LabelEditorState, savedLabels: LabelSpec[]): LabelEditorState {
    return {
        saved: savedLabels.map(cloneSpec),
        working: savedLabels.map(cloneSpec),
        dirty: false,
        messages: [],
        warnings: state.warnings,
    };
}

export function validateLabels(working: LabelSpec[]): string[] {
    const messages: string[] = [];
    const ids = new Set<string>();
    const names = new Set<string>();
    for (const spec of working) {
        if (spec.name.trim() === "") {
            messages.push(`label "${spec.id}" has an empty name`);
        }
        if (ids.has(spec.id)) {
            messages.push(`duplicate label id "${spec.id}"`);
        }
        ids.add(spec.id);
        const key = spec.name.trim().toLowerCase();
        if (key !== "" && names.has(key)) {
            messages.push(`duplicate label name "${spec.name}"`);
        }
        names.add(key);
    }
    return messages;
}

// a rejected save surfaces the server's reason next to the editor instead of
// silently reverting the buffer
export function serviceRejection(state: LabelEditorState, detail: string): LabelEditorState {
    return {
        saved: state.saved,
        working: state.working,
        dirty: state.dirty,
        messages: [...state.messages, `service rejected labels: ${detail}`],
        warnings: state.warnings,
    };
}

export function clearWarnings(state: LabelEditorState): LabelEditorState {
    return { ...state, warnings: [] };
}

// ---------------------------------------------------------------- cluster view

export interface ClusterPanel {
    labelId: string;
    labelName: string;
    documents: ResultEntry[];
}

export interface ClusterViewState {
    jobId: string;
    mode: string;
    p: number | null;
    panels: ClusterPanel[];
    unassigned: ResultEntry[];
    metrics: Record<string, number> | null;
}

// pure projection of the results snapshot; the server already sorts each
// group by confidence, so order is preserved rather than recomputed
export function buildClusterView(results: ResultsSnapshot): ClusterViewState {
    return {
        jobId: results.job_id,
        mode: results.mode,
        p: results.p,
        panels: results.groups.map((group) => ({
            labelId: group.label_id,
            labelName: group.label_name,
            documents: group.documents.map((doc) => ({ ...doc })),
        })),
        unassigned: results.unassigned.map((doc) => ({ ...doc })),
        metrics: results.metrics === null ? null : { ...results.metrics },
    };
}

// every document sits in exactly one bucket; duplicated or dropped ids mean
// the snapshot is inconsistent and must not be rendered
export function eachDocumentOnce(view: ClusterViewState): boolean {
    const seen = new Set<string>();
    const buckets = [...view.panels.map((panel) => panel.documents), view.unassigned];
    for (const docs of buckets) {
        for (const doc of docs) {
            if (seen.has(doc.id)) return false;
            seen.add(doc.id);
        }
    }
    return true;
}

// ------------------------------------------------------------------ run state

export interface RunState {
    mode: "complete" | "partial";
    p: number;
    job: JobView | null;
    view: ClusterViewState | null;
    banner: string | null;
}

export function initialRunState(): RunState {
    return { mode: "complete", p: 0.75, job: null, view: null, banner: null };
}

export function setMode(state: RunState, mode: "complete" | "partial"): RunState {
    return { ...state, mode };
}

export function setP(state: RunState, p: number): RunState {
    const clamped = Math.min(1, Math.max(0, p));
    return { ...state, p: clamped };
}

export function jobStarted(state: RunState, job: JobView): RunState {
    return { ...state, job, banner: null };
}

// a failed job keeps the previous cluster view on screen; only the banner
// reports the failure
export function jobUpdated(state: RunState, job: JobView): RunState {
    if (job.status === "failed") {
        const reason = job.message ?? "assignment failed";
        return { ...state, job, banner: reason };
    }
    return { ...state, job };
}

export function resultsLoaded(state: RunState, results: ResultsSnapshot): RunState {
    return { ...state, view: buildClusterView(results), banner: null };
}
