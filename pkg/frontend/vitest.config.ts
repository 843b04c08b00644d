import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the round-trip suite boots the Python API server
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
