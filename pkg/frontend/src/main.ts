import { ApiClient } from "./api";
import { renderHistoryChart } from "./chart";
import { pollJob } from "./poll";
import { ConfigFormState, guardNavigation } from "./state";
import type { ProjectInfo } from "./types";
import { renderClassSearch } from "./views/classSearch";
import { renderConfigPanel } from "./views/configPanel";
import { renderErrorBrowser, renderMetricsTable } from "./views/errorBrowser";
import { renderPopover, renderSentence } from "./views/inspector";

const TABS = ["search", "corpus", "config", "history", "errors"] as const;
type Tab = (typeof TABS)[number];

export class App {
  api: ApiClient;
  root: HTMLElement;
  configState: ConfigFormState | null = null;
  project: ProjectInfo | null = null;
  activeCorpus: string | null = null;
  activeTab: Tab = "search";
  viewAbort = new AbortController();
  confirmFn: (message: string) => boolean;

  constructor(root: HTMLElement, api: ApiClient, confirmFn?: (message: string) => boolean) {
    this.root = root;
    this.api = api;
    this.confirmFn = confirmFn ?? ((message) => window.confirm(message));
  }

  async start(): Promise<void> {
    this.project = await this.api.project();
    this.configState = new ConfigFormState(await this.api.config());
    this.activeCorpus = this.project.corpora[0]?.id ?? null;
    this.renderShell();
    await this.showTab("search");
    window.addEventListener("beforeunload", (event) => {
      if (this.configState?.isDirty()) {
        event.preventDefault();
      }
    });
  }

  renderShell(): void {
    this.root.textContent = "";
    const nav = document.createElement("nav");
    nav.className = "tabs";
    for (const tab of TABS) {
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = tab;
      button.dataset.tab = tab;
      button.addEventListener("click", () => void this.showTab(tab));
      nav.appendChild(button);
    }
    this.root.appendChild(nav);
    const main = document.createElement("main");
    main.id = "view";
    this.root.appendChild(main);
  }

  view(): HTMLElement {
    return this.root.querySelector("#view") as HTMLElement;
  }

  async showTab(tab: Tab): Promise<void> {
    // leaving the config tab with unsaved edits needs an explicit ok
    if (this.activeTab === "config" && tab !== "config") {
      if (!guardNavigation(this.configState, this.confirmFn)) {
        return;
      }
      this.configState?.revert();
    }
    this.viewAbort.abort();
    this.viewAbort = new AbortController();
    this.activeTab = tab;
    this.root.querySelectorAll(".tabs button").forEach((b) => {
      b.classList.toggle("active", (b as HTMLElement).dataset.tab === tab);
    });
    const view = this.view();
    view.textContent = "";
    if (tab === "search") await this.showSearch(view);
    else if (tab === "corpus") await this.showCorpus(view);
    else if (tab === "config") this.showConfig(view);
    else if (tab === "history") await this.showHistory(view);
    else if (tab === "errors") await this.showErrors(view);
  }

  async showSearch(view: HTMLElement): Promise<void> {
    view.appendChild(
      renderClassSearch({
        api: this.api,
        signal: this.viewAbort.signal,
        onExtracted: () => void this.refreshProject(),
      }),
    );
  }

  async refreshProject(): Promise<void> {
    this.project = await this.api.project();
    if (this.configState && !this.configState.isDirty()) {
      this.configState = new ConfigFormState(await this.api.config());
    }
  }

  async annotateActive(): Promise<void> {
    if (!this.activeCorpus) return;
    const { job_id } = await this.api.annotate(this.activeCorpus);
    await pollJob(this.api, job_id, { signal: this.viewAbort.signal, intervalMs: 150 });
  }

  async showCorpus(view: HTMLElement): Promise<void> {
    if (!this.activeCorpus) {
      view.textContent = "no corpora in this project — upload one first";
      return;
    }
    const status = document.createElement("div");
    status.className = "corpus-status";
    view.appendChild(status);
    status.textContent = "annotating…";
    try {
      await this.annotateActive();
    } catch (error) {
      if (String(error).includes("aborted")) return;
      status.textContent = String(error);
      return;
    }
    status.textContent = "";
    const page = await this.api.corpusPage(this.activeCorpus);
    const list = document.createElement("div");
    list.className = "sentences";
    for (const sentence of page.sentences) {
      list.appendChild(
        renderSentence(sentence, {
          onTokenClick: (sent, tok, anchor) => void this.openPopover(sent, tok, anchor),
          onTokenOverride: (sent, tok) => void this.applyOverride(sent, tok),
        }),
      );
    }
    view.appendChild(list);
  }

  async openPopover(sentence: number, token: number, anchor: HTMLElement): Promise<void> {
    if (!this.activeCorpus) return;
    this.root.querySelectorAll(".popover").forEach((p) => p.remove());
    const inspection = await this.api.inspect(this.activeCorpus, sentence, token);
    anchor.appendChild(renderPopover(inspection));
  }

  async applyOverride(sentence: number, token: number): Promise<void> {
    if (!this.activeCorpus) return;
    const label = this.confirmFn(`Clear the tag on token ${token}?`) ? "O" : null;
    if (label === null) return;
    await this.api.override(this.activeCorpus, sentence, token, token + 1, label);
    await this.showTab("corpus");
  }

  showConfig(view: HTMLElement): void {
    if (!this.configState || !this.project) return;
    view.appendChild(
      renderConfigPanel({
        state: this.configState,
        lexiconNames: this.project.lexicons.map((l) => l.name),
        onSave: (patch) => this.api.saveConfig(patch),
        onSaved: () => void this.afterConfigSave(),
      }),
    );
  }

  /** A config save re-annotates the active corpus and refreshes the report. */
  async afterConfigSave(): Promise<void> {
    if (!this.activeCorpus) return;
    await this.annotateActive();
    await this.api.evalReport(this.activeCorpus);
  }

  async showHistory(view: HTMLElement): Promise<void> {
    const history = await this.api.history();
    const controls = document.createElement("div");
    controls.className = "history-controls";
    const description = document.createElement("input");
    description.type = "text";
    description.placeholder = "what changed?";
    const snapshot = document.createElement("button");
    snapshot.type = "button";
    snapshot.className = "snapshot";
    snapshot.textContent = "Snapshot step";
    snapshot.addEventListener("click", async () => {
      if (this.activeCorpus) {
        await this.annotateActive();
        await this.api.evalReport(this.activeCorpus);
      }
      await this.api.snapshot(description.value || `step ${history.length}`);
      await this.showTab("history");
    });
    controls.appendChild(description);
    controls.appendChild(snapshot);
    view.appendChild(controls);
    view.appendChild(renderHistoryChart(history));
  }

  async showErrors(view: HTMLElement): Promise<void> {
    if (!this.activeCorpus) {
      view.textContent = "no corpus to evaluate";
      return;
    }
    const report = await this.api.evalReport(this.activeCorpus);
    view.appendChild(renderMetricsTable(report));
    view.appendChild(
      renderErrorBrowser(report, {
        onAddFalsePositive: (token) => {
          if (!this.configState) return;
          const current = this.configState.draft.false_positives;
          if (!current.includes(token)) {
            this.configState.set("false_positives", [...current, token]);
          }
          void this.showTab("config");
        },
        onJumpToToken: () => void this.showTab("corpus"),
      }),
    );
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (root) {
    const app = new App(root, new ApiClient());
    void app.start().catch((error) => {
      root.textContent = `failed to load project: ${String(error)}`;
    });
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
