/** Browser entry point: wire the store to the root container. */

import { ApiClient } from "./api.js";
import { WizardStore } from "./state.js";
import { render } from "./views.js";

export function createApp(container: HTMLElement, baseUrl: string): WizardStore {
  const store = new WizardStore(new ApiClient(baseUrl));
  store.subscribe(() => render(container, store));
  render(container, store);
  return store;
}

declare global {
  interface Window {
    EXOAR_API_BASE?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = window.EXOAR_API_BASE ?? window.location.origin;
  createApp(document.getElementById("app") as HTMLElement, base);
}
