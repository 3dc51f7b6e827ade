// Entry point: wires the label editor and the run/inspect screen to the
// assignment service. All state transitions live in state.ts; this module
// only holds the current snapshots and re-renders after each change.

import { ApiError, Client } from "./api.js";
import {
    addLabel,
    clearWarnings,
    confirmSeedDoc,
    editorFromLabels,
    emptyEditor,
    initialRunState,
    jobStarted,
    jobUpdated,
    markSaved,
    removeLabel,
    renameLabel,
    resultsLoaded,
    serviceRejection,
    setMode,
    setP,
    setTerms,
    unconfirmSeedDoc,
} from "./state.js";
import type { LabelEditorState, RunState } from "./state.js";
import {
    renderBanner,
    renderClusterView,
    renderDirtyBadge,
    renderJobStatus,
    renderLabelList,
    renderMessages,
    renderRunControls,
    renderSeedSearchResults,
    renderWarnings,
} from "./render.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8040";
const POLL_INTERVAL_MS = 500;

let client = new Client(localStorage.getItem("service-url") || DEFAULT_BASE_URL);
let sessionId: string | null = null;
let editor: LabelEditorState = emptyEditor();
let run: RunState = initialRunState();
let seedLabelId: string | null = null;
let pollTimer: number | null = null;

function byId<T extends HTMLElement>(id: string): T {
    return document.getElementById(id) as T;
}

function setStatus(text: string, isError = false): void {
    const status = byId<HTMLElement>("connection-status");
    status.textContent = text;
    status.className = isError ? "status status-error" : "status";
}

// ------------------------------------------------------------------ rendering

function renderEditor(): void {
    renderDirtyBadge(byId("dirty-badge"), editor.dirty);
    renderMessages(byId("editor-messages"), editor.messages);
    renderWarnings(byId("editor-warnings"), editor.warnings);
    renderLabelList(byId("label-list"), editor, {
        onRename: (id, name) => {
            editor = renameLabel(editor, id, name);
            renderEditor();
        },
        onRemove: (id) => {
            editor = removeLabel(editor, id, run.view !== null);
            renderEditor();
        },
        onTerms: (id, terms) => {
            editor = setTerms(editor, id, terms);
            renderEditor();
        },
        onUnconfirmSeed: (id, docId) => {
            editor = unconfirmSeedDoc(editor, id, docId);
            renderEditor();
        },
        onPickSeeds: (id) => {
            openSeedPicker(id);
        },
    });
    const saveBtn = byId<HTMLButtonElement>("save-labels");
    saveBtn.disabled = !editor.dirty || editor.messages.length > 0 || sessionId === null;
}

function renderRun(): void {
    renderRunControls(byId("run-controls"), run, {
        onMode: (mode) => {
            run = setMode(run, mode);
            renderRun();
        },
        onP: (p) => {
            run = setP(run, p);
            renderRun();
        },
        onRun: () => {
            startRun();
        },
    });
    renderJobStatus(byId("job-status"), run.job);
    renderBanner(byId("error-banner"), run.banner);
    renderClusterView(byId("cluster-view"), run.view);
}

// ------------------------------------------------------------------- sessions

async function refreshSessions(): Promise<void> {
    const select = byId<HTMLSelectElement>("session-select");
    try {
        const listing = await client.listSessions();
        select.innerHTML = "";
        const placeholder = document.createElement("option");
        placeholder.value = "";
        placeholder.textContent = "select a session";
        select.appendChild(placeholder);
        for (const session of listing.sessions) {
            const option = document.createElement("option");
            option.value = session.id;
            option.textContent = `${session.id} (${session.n_documents} docs, ${session.n_labels} labels)`;
            if (session.id === sessionId) option.selected = true;
            select.appendChild(option);
        }
        setStatus(`connected to ${client.baseUrl}`);
    } catch (error) {
        console.error("failed to list sessions:", error);
        setStatus(`cannot reach ${client.baseUrl}`, true);
    }
}

async function selectSession(id: string): Promise<void> {
    try {
        const detail = await client.getSession(id);
        sessionId = id;
        editor = editorFromLabels(detail.labels);
        run = initialRunState();
        if (detail.latest_job_id !== null) {
            try {
                const results = await client.getResults(id);
                run = resultsLoaded(run, results);
            } catch (error) {
                console.error("no results for session yet:", error);
            }
        }
        renderEditor();
        renderRun();
    } catch (error) {
        console.error("failed to load session:", error);
        setStatus(`failed to load session ${id}`, true);
    }
}

async function createSession(): Promise<void> {
    const corpusInput = byId<HTMLTextAreaElement>("corpus-input");
    const text = corpusInput.value.trim();
    if (text === "") {
        setStatus("paste a JSONL corpus first", true);
        return;
    }
    try {
        const summary = await client.createSession(text);
        corpusInput.value = "";
        await refreshSessions();
        await selectSession(summary.id);
    } catch (error) {
        console.error("failed to create session:", error);
        const detail = error instanceof ApiError ? error.detail : String(error);
        setStatus(`session rejected: ${detail}`, true);
    }
}

// --------------------------------------------------------------- label saving

async function saveLabels(): Promise<void> {
    if (sessionId === null) return;
    try {
        const response = await client.putLabels(sessionId, editor.working);
        editor = markSaved(editor, response.labels);
        renderEditor();
        setStatus(`labels saved (version ${response.labels_version})`);
    } catch (error) {
        console.error("label save rejected:", error);
        const detail = error instanceof ApiError ? error.detail : String(error);
        editor = serviceRejection(editor, detail);
        renderEditor();
    }
}

// ---------------------------------------------------------------- seed picker

function openSeedPicker(labelId: string): void {
    seedLabelId = labelId;
    byId<HTMLElement>("seed-picker").hidden = false;
    byId<HTMLElement>("seed-picker-label").textContent = `seed documents for "${labelId}"`;
    byId<HTMLInputElement>("seed-query").value = "";
    byId<HTMLElement>("seed-results").innerHTML = "";
}

function closeSeedPicker(): void {
    seedLabelId = null;
    byId<HTMLElement>("seed-picker").hidden = true;
}

async function searchSeeds(): Promise<void> {
    if (sessionId === null || seedLabelId === null) return;
    const query = byId<HTMLInputElement>("seed-query").value.trim();
    try {
        const response = await client.searchDocuments(sessionId, query, 20);
        renderSeedSearchResults(byId("seed-results"), response.documents, (docId) => {
            if (seedLabelId !== null) {
                editor = confirmSeedDoc(editor, seedLabelId, docId);
                renderEditor();
            }
        });
    } catch (error) {
        console.error("seed search failed:", error);
    }
}

// ------------------------------------------------------------------- assigning

function stopPolling(): void {
    if (pollTimer !== null) {
        clearInterval(pollTimer);
        pollTimer = null;
    }
}

async function pollJob(jobId: string): Promise<void> {
    if (sessionId === null) return;
    try {
        const job = await client.getJob(sessionId, jobId);
        run = jobUpdated(run, job);
        if (job.status === "done") {
            stopPolling();
            const results = await client.getResults(sessionId, jobId);
            run = resultsLoaded(run, results);
        } else if (job.status === "failed") {
            // keep the previous cluster view; only the banner changes
            stopPolling();
        }
        renderRun();
    } catch (error) {
        console.error("job poll failed:", error);
    }
}

async function startRun(): Promise<void> {
    if (sessionId === null) {
        setStatus("select a session first", true);
        return;
    }
    if (editor.dirty) {
        setStatus("save label changes before running", true);
        return;
    }
    const body =
        run.mode === "partial"
            ? { mode: "partial" as const, p: run.p }
            : { mode: "complete" as const };
    try {
        const job = await client.startAssign(sessionId, body);
        editor = clearWarnings(editor);
        run = jobStarted(run, job);
        renderEditor();
        renderRun();
        stopPolling();
        pollTimer = setInterval(() => {
            pollJob(job.job_id);
        }, POLL_INTERVAL_MS) as unknown as number;
    } catch (error) {
        console.error("failed to start assignment:", error);
        const detail = error instanceof ApiError ? error.detail : String(error);
        run = { ...run, banner: `could not start run: ${detail}` };
        renderRun();
    }
}

// ---------------------------------------------------------------------- wiring

function switchTab(tab: "edit" | "run"): void {
    byId<HTMLElement>("screen-edit").hidden = tab !== "edit";
    byId<HTMLElement>("screen-run").hidden = tab !== "run";
    byId<HTMLButtonElement>("tab-edit").classList.toggle("tab-active", tab === "edit");
    byId<HTMLButtonElement>("tab-run").classList.toggle("tab-active", tab === "run");
}

function initialize(): void {
    const urlInput = byId<HTMLInputElement>("base-url");
    urlInput.value = client.baseUrl;
    byId<HTMLButtonElement>("connect").addEventListener("click", () => {
        client = new Client(urlInput.value.trim() || DEFAULT_BASE_URL);
        localStorage.setItem("service-url", client.baseUrl);
        sessionId = null;
        editor = emptyEditor();
        run = initialRunState();
        stopPolling();
        refreshSessions();
        renderEditor();
        renderRun();
    });

    byId<HTMLSelectElement>("session-select").addEventListener("change", (event) => {
        const id = (event.target as HTMLSelectElement).value;
        if (id !== "") selectSession(id);
    });
    byId<HTMLButtonElement>("create-session").addEventListener("click", createSession);

    byId<HTMLButtonElement>("tab-edit").addEventListener("click", () => switchTab("edit"));
    byId<HTMLButtonElement>("tab-run").addEventListener("click", () => switchTab("run"));

    const addName = byId<HTMLInputElement>("add-name");
    byId<HTMLButtonElement>("add-label").addEventListener("click", () => {
        const name = addName.value.trim();
        if (name === "") return;
        editor = addLabel(editor, name);
        addName.value = "";
        renderEditor();
    });
    byId<HTMLButtonElement>("save-labels").addEventListener("click", saveLabels);

    byId<HTMLButtonElement>("seed-search").addEventListener("click", searchSeeds);
    byId<HTMLInputElement>("seed-query").addEventListener("keydown", (event) => {
        if (event.key === "Enter") {
            event.preventDefault();
            searchSeeds();
        }
    });
    byId<HTMLButtonElement>("seed-close").addEventListener("click", closeSeedPicker);

    switchTab("edit");
    renderEditor();
    renderRun();
    refreshSessions();
}

if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", initialize);
} else {
    initialize();
}
