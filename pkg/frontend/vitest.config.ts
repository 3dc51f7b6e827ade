import { defineConfig } from "vitest/config";

// integration tests spawn the real service and wait on jobs, so the ceilings
// are generous; unit tests finish in milliseconds regardless
export default defineConfig({
    test: {
        environment: "node",
        testTimeout: 120_000,
        hookTimeout: 120_000,
    },
});
