import type {
  ClassEntry,
  Config,
  CorpusPage,
  EvalReport,
  FieldError,
  HistoryStep,
  Inspection,
  Job,
  ProjectInfo,
  SentenceView,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Outcome of a config save: either the accepted config or field errors. */
export type SaveResult =
  | { ok: true; config: Config }
  | { ok: false; errors: FieldError[] };

const API = "/api/v1";

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.base + API + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = await response.json();
        detail = payload.detail ?? JSON.stringify(payload);
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  project(): Promise<ProjectInfo> {
    return this.request("GET", "/project");
  }

  searchClasses(query: string): Promise<ClassEntry[]> {
    return this.request("GET", `/classes?q=${encodeURIComponent(query)}`);
  }

  buildIndex(): Promise<{ job_id: string }> {
    return this.request("POST", "/index");
  }

  extractLexicon(classIds: string[], label: string, name?: string): Promise<{ job_id: string }> {
    return this.request("POST", "/lexicons", {
      class_ids: classIds,
      label,
      name: name ?? null,
    });
  }

  config(): Promise<Config> {
    return this.request("GET", "/config");
  }

  /** PUT /config; 422 field errors come back as a value, not an exception. */
  async saveConfig(patch: Partial<Config>): Promise<SaveResult> {
    const response = await this.fetchFn(this.base + API + "/config", {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(patch),
    });
    if (response.status === 422) {
      const payload = await response.json();
      return { ok: false, errors: payload.errors ?? [] };
    }
    if (!response.ok) {
      throw new ApiError(response.status, response.statusText);
    }
    return { ok: true, config: (await response.json()) as Config };
  }

  annotate(corpusId: string): Promise<{ job_id: string }> {
    return this.request("POST", "/annotate", { corpus_id: corpusId });
  }

  job(jobId: string): Promise<Job> {
    return this.request("GET", `/jobs/${jobId}`);
  }

  evalReport(corpusId: string, topK = 10): Promise<EvalReport> {
    return this.request("GET", `/eval?corpus_id=${encodeURIComponent(corpusId)}&top_k=${topK}`);
  }

  inspect(corpusId: string, sentence: number, token: number): Promise<Inspection> {
    return this.request(
      "GET",
      `/inspect?corpus_id=${encodeURIComponent(corpusId)}&sent=${sentence}&tok=${token}`,
    );
  }

  corpusPage(corpusId: string, page = 0, size = 50): Promise<CorpusPage> {
    return this.request("GET", `/corpora/${encodeURIComponent(corpusId)}?page=${page}&size=${size}`);
  }

  override(
    corpusId: string,
    sentence: number,
    start: number,
    end: number,
    label: string,
  ): Promise<SentenceView> {
    return this.request("POST", "/override", {
      corpus_id: corpusId,
      sentence,
      start,
      end,
      label,
    });
  }

  history(): Promise<HistoryStep[]> {
    return this.request("GET", "/history");
  }

  snapshot(description: string): Promise<HistoryStep> {
    return this.request("POST", "/history", { description });
  }

  exportUrl(corpusId: string, layer: string): string {
    return `${this.base}${API}/export?corpus_id=${encodeURIComponent(corpusId)}&layer=${layer}`;
  }
}
