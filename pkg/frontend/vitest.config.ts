import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The parity suite boots the Python server; give it room.
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
