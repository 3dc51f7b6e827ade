import { describe, expect, it } from "vitest";

import {
    addLabel,
    buildClusterView,
    confirmSeedDoc,
    eachDocumentOnce,
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
    slugify,
    unconfirmSeedDoc,
    validateLabels,
} from "../src/state.js";
import type { JobView, LabelSpec, ResultsSnapshot } from "../src/types.js";

function sampleResults(): ResultsSnapshot {
    return {
        job_id: "job-0001",
        mode: "partial",
        p: 0.75,
        groups: [
            {
                label_id: "label-0",
                label_name: "alpha",
                documents: [
                    { id: "doc-2", text: "alpha two", gold_label: "alpha", confidence: 0.9 },
                    { id: "doc-1", text: "alpha one", gold_label: "alpha", confidence: 0.7 },
                ],
            },
            {
                label_id: "label-1",
                label_name: "bravo",
                documents: [
                    { id: "doc-3", text: "bravo three", gold_label: "bravo", confidence: 0.8 },
                ],
            },
        ],
        unassigned: [
            { id: "doc-4", text: "noise", gold_label: null, confidence: 0.1 },
        ],
        metrics: { purity: 1.0, inverse_purity: 1.0, p1: 1.0, mi_nats: 0.69 },
    };
}

describe("label editor state", () => {
    it("adding a label shows it in the list and stays dirty until saved", () => {
        let state = emptyEditor();
        state = addLabel(state, "Music");
        expect(state.working).toHaveLength(1);
        expect(state.working[0].name).toBe("Music");
        expect(state.working[0].id).toBe("music");
        expect(state.dirty).toBe(true);

        state = markSaved(state, state.working);
        expect(state.dirty).toBe(false);
        expect(state.saved).toHaveLength(1);
    });

    it("five confirmed seed documents end up as five ids on the spec", () => {
        let state = editorFromLabels([{ id: "label-0", name: "alpha" }]);
        for (const docId of ["doc-1", "doc-2", "doc-3", "doc-4", "doc-5"]) {
            state = confirmSeedDoc(state, "label-0", docId);
        }
        expect(state.working[0].seed_doc_ids).toEqual([
            "doc-1",
            "doc-2",
            "doc-3",
            "doc-4",
            "doc-5",
        ]);
        expect(state.dirty).toBe(true);

        // confirming the same document twice adds it once
        state = confirmSeedDoc(state, "label-0", "doc-1");
        expect(state.working[0].seed_doc_ids).toHaveLength(5);

        state = unconfirmSeedDoc(state, "label-0", "doc-3");
        expect(state.working[0].seed_doc_ids).toEqual(["doc-1", "doc-2", "doc-4", "doc-5"]);
    });

    it("removing a label while results exist warns that the next run regroups", () => {
        let state = editorFromLabels([
            { id: "label-0", name: "alpha" },
            { id: "label-1", name: "bravo" },
        ]);
        state = removeLabel(state, "label-1", true);
        expect(state.working).toHaveLength(1);
        expect(state.warnings).toHaveLength(1);
        expect(state.warnings[0]).toContain("label-1");
        expect(state.warnings[0]).toContain("next run");
    });

    it("removing without results present warns nothing", () => {
        let state = editorFromLabels([{ id: "label-0", name: "alpha" }]);
        state = removeLabel(state, "label-0", false);
        expect(state.warnings).toHaveLength(0);
    });

    it("dirty is structural: add then remove, or rename then rename back, is clean", () => {
        const saved: LabelSpec[] = [{ id: "label-0", name: "alpha" }];
        let state = editorFromLabels(saved);

        state = addLabel(state, "Extra");
        expect(state.dirty).toBe(true);
        state = removeLabel(state, "extra", false);
        expect(state.dirty).toBe(false);

        state = renameLabel(state, "label-0", "omega");
        expect(state.dirty).toBe(true);
        state = renameLabel(state, "label-0", "alpha");
        expect(state.dirty).toBe(false);

        state = setTerms(state, "label-0", ["songs"]);
        expect(state.dirty).toBe(true);
        state = setTerms(state, "label-0", []);
        expect(state.dirty).toBe(false);
    });

    it("auto ids slugify the name and dodge collisions", () => {
        expect(slugify("Music")).toBe("music");
        expect(slugify("Heavy Metal!")).toBe("heavy-metal");
        expect(slugify("  ??  ")).toBe("label");

        let state = emptyEditor();
        state = addLabel(state, "Rock");
        state = addLabel(state, "rock");
        expect(state.working.map((spec) => spec.id)).toEqual(["rock", "rock-2"]);
    });

    it("validation flags empty and duplicate names", () => {
        expect(validateLabels([{ id: "a", name: "alpha" }])).toEqual([]);
        expect(validateLabels([{ id: "a", name: "  " }])).toEqual([
            'label "a" has an empty name',
        ]);
        expect(
            validateLabels([
                { id: "a", name: "alpha" },
                { id: "b", name: "Alpha" },
            ])
        ).toEqual(['duplicate label name "Alpha"']);
        expect(
            validateLabels([
                { id: "a", name: "alpha" },
                { id: "a", name: "bravo" },
            ])
        ).toEqual(['duplicate label id "a"']);
    });

    it("a service rejection lands as an inline message without touching the buffer", () => {
        let state = editorFromLabels([{ id: "label-0", name: "alpha" }]);
        state = renameLabel(state, "label-0", "omega");
        const before = state.working;
        state = serviceRejection(state, "label names must be unique");
        expect(state.messages).toEqual(["service rejected labels: label names must be unique"]);
        expect(state.working).toEqual(before);
        expect(state.dirty).toBe(true);
    });

    it("markSaved adopts the server copy of the labels", () => {
        let state = emptyEditor();
        state = addLabel(state, "alpha");
        const serverLabels: LabelSpec[] = [
            { id: "alpha", name: "alpha", template: "Is this about {name}?" },
        ];
        state = markSaved(state, serverLabels);
        expect(state.dirty).toBe(false);
        expect(state.working[0].template).toBe("Is this about {name}?");

        // renaming after adoption compares against the adopted copy
        state = renameLabel(state, "alpha", "alpha stories");
        expect(state.dirty).toBe(true);
        state = renameLabel(state, "alpha", "alpha");
        expect(state.dirty).toBe(false);
    });
});

describe("cluster view", () => {
    it("projects the snapshot into panels preserving server order", () => {
        const view = buildClusterView(sampleResults());
        expect(view.panels).toHaveLength(2);
        expect(view.panels[0].labelName).toBe("alpha");
        expect(view.panels[0].documents.map((doc) => doc.id)).toEqual(["doc-2", "doc-1"]);
        expect(view.unassigned.map((doc) => doc.id)).toEqual(["doc-4"]);
        expect(view.metrics).not.toBeNull();
        expect(view.metrics?.p1).toBe(1.0);
    });

    it("is a pure function: same snapshot rebuilds an identical view", () => {
        const results = sampleResults();
        expect(buildClusterView(results)).toEqual(buildClusterView(results));
    });

    it("copies the snapshot instead of aliasing it", () => {
        const results = sampleResults();
        const view = buildClusterView(results);
        results.groups[0].documents[0].text = "mutated";
        expect(view.panels[0].documents[0].text).toBe("alpha two");
    });

    it("each document sits in exactly one bucket", () => {
        const view = buildClusterView(sampleResults());
        expect(eachDocumentOnce(view)).toBe(true);

        const broken = sampleResults();
        broken.unassigned.push({ id: "doc-1", text: "dup", gold_label: null, confidence: 0 });
        expect(eachDocumentOnce(buildClusterView(broken))).toBe(false);
    });

    it("carries a null metrics panel when the corpus has no gold labels", () => {
        const results = sampleResults();
        results.metrics = null;
        expect(buildClusterView(results).metrics).toBeNull();
    });
});

describe("run state", () => {
    const runningJob: JobView = {
        job_id: "job-0002",
        status: "running",
        stage: "pipeline",
        mode: "complete",
        p: null,
    };

    it("clamps the p slider into [0, 1]", () => {
        let state = initialRunState();
        state = setP(state, 1.7);
        expect(state.p).toBe(1);
        state = setP(state, -0.2);
        expect(state.p).toBe(0);
        state = setP(state, 0.6);
        expect(state.p).toBe(0.6);
        state = setMode(state, "partial");
        expect(state.mode).toBe("partial");
    });

    it("a failed job keeps the previous results and raises the banner", () => {
        let state = initialRunState();
        state = resultsLoaded(state, sampleResults());
        const viewBefore = state.view;
        expect(viewBefore).not.toBeNull();

        state = jobStarted(state, runningJob);
        expect(state.banner).toBeNull();

        const failed: JobView = {
            ...runningJob,
            status: "failed",
            message: "embedding provider unreachable",
        };
        state = jobUpdated(state, failed);
        expect(state.banner).toBe("embedding provider unreachable");
        expect(state.view).toEqual(viewBefore);
    });

    it("fresh results replace the view and clear the banner", () => {
        let state = initialRunState();
        state = jobUpdated(state, { ...runningJob, status: "failed", message: "boom" });
        expect(state.banner).toBe("boom");

        state = resultsLoaded(state, sampleResults());
        expect(state.banner).toBeNull();
        expect(state.view?.jobId).toBe("job-0001");
    });

    it("a failed job without a message still raises a banner", () => {
        let state = initialRunState();
        state = jobUpdated(state, { ...runningJob, status: "failed" });
        expect(state.banner).toBe("assignment failed");
    });
});
