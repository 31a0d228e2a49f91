import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // the integration suite boots the Python service and waits for it
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
