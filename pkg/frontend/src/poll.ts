import type { ApiClient } from "./api";
import type { Job } from "./types";

export interface PollOptions {
  intervalMs?: number;
  signal?: AbortSignal;
  onProgress?: (job: Job) => void;
}

/**
 * Poll a job at 1 Hz until it is done or failed. Aborting the signal (e.g.
 * on view change) stops polling and rejects with "aborted".
 */
export function pollJob(api: ApiClient, jobId: string, options: PollOptions = {}): Promise<Job> {
  const interval = options.intervalMs ?? 1000;
  return new Promise((resolve, reject) => {
    let timer: ReturnType<typeof setTimeout> | null = null;

    const stop = () => {
      if (timer !== null) clearTimeout(timer);
      options.signal?.removeEventListener("abort", onAbort);
    };
    const onAbort = () => {
      stop();
      reject(new Error("aborted"));
    };
    options.signal?.addEventListener("abort", onAbort);

    const tick = async () => {
      let job: Job;
      try {
        job = await api.job(jobId);
      } catch (error) {
        stop();
        reject(error);
        return;
      }
      options.onProgress?.(job);
      if (job.state === "done") {
        stop();
        resolve(job);
      } else if (job.state === "failed") {
        stop();
        reject(new Error(job.error ?? "job failed"));
      } else if (!options.signal?.aborted) {
        timer = setTimeout(tick, interval);
      }
    };
    void tick();
  });
}
