// DOM rendering for the two screens. Renderers rebuild their container from
// state on every call; user-supplied strings always go through textContent.

import type { DocumentHit, JobView } from "./types.js";
import type { ClusterViewState, LabelEditorState, RunState } from "./state.js";
import { eachDocumentOnce } from "./state.js";

export interface EditorHandlers {
    onRename: (id: string, name: string) => void;
    onRemove: (id: string) => void;
    onTerms: (id: string, terms: string[]) => void;
    onUnconfirmSeed: (id: string, docId: string) => void;
    onPickSeeds: (id: string) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function renderDirtyBadge(container: HTMLElement, dirty: boolean): void {
    container.textContent = dirty ? "unsaved changes" : "saved";
    container.className = dirty ? "badge badge-dirty" : "badge badge-clean";
}

export function renderMessages(container: HTMLElement, messages: string[]): void {
    container.innerHTML = "";
    for (const message of messages) {
        container.appendChild(el("div", "message message-error", message));
    }
}

export function renderWarnings(container: HTMLElement, warnings: string[]): void {
    container.innerHTML = "";
    for (const warning of warnings) {
        container.appendChild(el("div", "message message-warning", warning));
    }
}

export function renderLabelList(
    container: HTMLElement,
    state: LabelEditorState,
    handlers: EditorHandlers
): void {
    container.innerHTML = "";
    for (const spec of state.working) {
        const row = el("div", "label-row");
        row.dataset.labelId = spec.id;

        const head = el("div", "label-row-head");
        head.appendChild(el("span", "label-id", spec.id));

        const nameInput = el("input", "label-name") as HTMLInputElement;
        nameInput.type = "text";
        nameInput.value = spec.name;
        nameInput.addEventListener("change", () => {
            handlers.onRename(spec.id, nameInput.value);
        });
        head.appendChild(nameInput);

        const removeBtn = el("button", "label-remove", "Remove");
        removeBtn.addEventListener("click", () => {
            handlers.onRemove(spec.id);
        });
        head.appendChild(removeBtn);
        row.appendChild(head);

        const termsInput = el("input", "label-terms") as HTMLInputElement;
        termsInput.type = "text";
        termsInput.placeholder = "seed terms, comma separated";
        termsInput.value = (spec.description_terms ?? []).join(", ");
        termsInput.addEventListener("change", () => {
            const terms = termsInput.value
                .split(",")
                .map((term) => term.trim())
                .filter((term) => term !== "");
            handlers.onTerms(spec.id, terms);
        });
        row.appendChild(termsInput);

        const seeds = el("div", "label-seeds");
        for (const docId of spec.seed_doc_ids ?? []) {
            const chip = el("span", "seed-chip", docId);
            const drop = el("button", "seed-drop", "x");
            drop.addEventListener("click", () => {
                handlers.onUnconfirmSeed(spec.id, docId);
            });
            chip.appendChild(drop);
            seeds.appendChild(chip);
        }
        const pickBtn = el("button", "seed-pick", "Pick seed docs");
        pickBtn.addEventListener("click", () => {
            handlers.onPickSeeds(spec.id);
        });
        seeds.appendChild(pickBtn);
        row.appendChild(seeds);

        container.appendChild(row);
    }
}

// search hits only become seeds through the per-document Confirm button
export function renderSeedSearchResults(
    container: HTMLElement,
    hits: DocumentHit[],
    onConfirm: (docId: string) => void
): void {
    container.innerHTML = "";
    if (hits.length === 0) {
        container.appendChild(el("div", "seed-hit-empty", "no matching documents"));
        return;
    }
    for (const hit of hits) {
        const row = el("div", "seed-hit");
        row.dataset.docId = hit.id;
        row.appendChild(el("span", "seed-hit-id", hit.id));
        row.appendChild(el("span", "seed-hit-text", hit.text));
        const confirmBtn = el("button", "seed-confirm", "Confirm");
        confirmBtn.addEventListener("click", () => {
            onConfirm(hit.id);
        });
        row.appendChild(confirmBtn);
        container.appendChild(row);
    }
}

export function renderJobStatus(container: HTMLElement, job: JobView | null): void {
    if (job === null) {
        container.textContent = "";
        container.className = "job-status";
        return;
    }
    container.className = `job-status job-${job.status}`;
    let text = `job ${job.job_id}: ${job.status} (${job.stage})`;
    if (job.status === "failed" && job.message) {
        text = `job ${job.job_id}: failed`;
    }
    container.textContent = text;
}

export function renderBanner(container: HTMLElement, banner: string | null): void {
    if (banner === null) {
        container.textContent = "";
        container.className = "banner banner-hidden";
        return;
    }
    container.textContent = banner;
    container.className = "banner banner-error";
}

function metricName(key: string): string {
    return key.replace(/_/g, " ");
}

export function renderClusterView(container: HTMLElement, view: ClusterViewState | null): void {
    container.innerHTML = "";
    if (view === null) {
        container.appendChild(el("div", "cluster-empty", "no results yet"));
        return;
    }
    if (!eachDocumentOnce(view)) {
        container.appendChild(
            el("div", "cluster-error", "results are inconsistent: a document appears twice")
        );
        return;
    }

    const meta = el("div", "cluster-meta");
    const modeText =
        view.mode === "partial" && view.p !== null
            ? `partial run, p = ${view.p}`
            : "complete run";
    meta.appendChild(el("span", "cluster-mode", modeText));
    meta.appendChild(el("span", "cluster-job", `job ${view.jobId}`));
    container.appendChild(meta);

    if (view.metrics !== null) {
        const panel = el("div", "metrics-panel");
        panel.appendChild(el("h3", undefined, "Metrics"));
        const list = el("dl", "metrics-list");
        for (const [key, value] of Object.entries(view.metrics)) {
            list.appendChild(el("dt", "metric-name", metricName(key)));
            list.appendChild(el("dd", "metric-value", value.toFixed(4)));
        }
        panel.appendChild(list);
        container.appendChild(panel);
    }

    const panels = el("div", "cluster-panels");
    for (const group of view.panels) {
        const panel = el("section", "cluster-panel");
        panel.dataset.labelId = group.labelId;
        panel.appendChild(
            el("h3", "panel-title", `${group.labelName} (${group.documents.length})`)
        );
        const list = el("div", "panel-docs");
        for (const doc of group.documents) {
            const details = el("details", "doc-entry");
            const summary = el("summary", "doc-summary");
            summary.appendChild(el("span", "doc-id", doc.id));
            summary.appendChild(el("span", "doc-confidence", doc.confidence.toFixed(3)));
            details.appendChild(summary);
            details.appendChild(el("div", "doc-text", doc.text));
            if (doc.gold_label !== null) {
                details.appendChild(el("div", "doc-gold", `gold: ${doc.gold_label}`));
            }
            list.appendChild(details);
        }
        panel.appendChild(list);
        panels.appendChild(panel);
    }
    container.appendChild(panels);

    // partial runs park the leftover documents in their own prominent bucket
    const unassigned = el("section", "cluster-panel cluster-unassigned");
    unassigned.appendChild(
        el("h3", "panel-title", `UNASSIGNED (${view.unassigned.length})`)
    );
    const leftovers = el("div", "panel-docs");
    if (view.unassigned.length === 0) {
        leftovers.appendChild(el("div", "doc-none", "every document is assigned"));
    }
    for (const doc of view.unassigned) {
        const details = el("details", "doc-entry");
        const summary = el("summary", "doc-summary");
        summary.appendChild(el("span", "doc-id", doc.id));
        summary.appendChild(el("span", "doc-confidence", doc.confidence.toFixed(3)));
        details.appendChild(summary);
        details.appendChild(el("div", "doc-text", doc.text));
        if (doc.gold_label !== null) {
            details.appendChild(el("div", "doc-gold", `gold: ${doc.gold_label}`));
        }
        leftovers.appendChild(details);
    }
    unassigned.appendChild(leftovers);
    container.appendChild(unassigned);
}

export function renderRunControls(
    container: HTMLElement,
    state: RunState,
    handlers: {
        onMode: (mode: "complete" | "partial") => void;
        onP: (p: number) => void;
        onRun: () => void;
    }
): void {
    container.innerHTML = "";

    const modeRow = el("div", "run-mode");
    for (const mode of ["complete", "partial"] as const) {
        const labelEl = el("label", "mode-option");
        const radio = el("input") as HTMLInputElement;
        radio.type = "radio";
        radio.name = "mode";
        radio.value = mode;
        radio.checked = state.mode === mode;
        radio.addEventListener("change", () => {
            if (radio.checked) handlers.onMode(mode);
        });
        labelEl.appendChild(radio);
        labelEl.appendChild(document.createTextNode(` ${mode}`));
        modeRow.appendChild(labelEl);
    }
    container.appendChild(modeRow);

    const pRow = el("div", "run-p");
    const slider = el("input", "p-slider") as HTMLInputElement;
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.05";
    slider.value = String(state.p);
    slider.disabled = state.mode !== "partial";
    const pValue = el("span", "p-value", state.p.toFixed(2));
    slider.addEventListener("input", () => {
        handlers.onP(Number(slider.value));
    });
    pRow.appendChild(el("span", "p-label", "assigned mass p"));
    pRow.appendChild(slider);
    pRow.appendChild(pValue);
    container.appendChild(pRow);

    const runBtn = el("button", "run-button", "Run assignment");
    runBtn.disabled = state.job !== null && state.job.status === "running";
    runBtn.addEventListener("click", handlers.onRun);
    container.appendChild(runBtn);
}
