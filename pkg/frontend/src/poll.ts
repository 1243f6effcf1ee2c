/** Poll a bound-search job until it leaves the running state. */

import type { ApiClient } from './api';
import type { JobStatus } from './types';

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  onProgress?: (status: JobStatus) => void;
  sleepImpl?: (ms: number) => Promise<void>;
}

export async function pollJobUntilDone(
  api: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobStatus> {
  const intervalMs = options.intervalMs ?? 150;
  const timeoutMs = options.timeoutMs ?? 120_000;
  const doSleep = options.sleepImpl ?? sleep;
  const startedAt = Date.now();

  for (;;) {
    const status = await api.jobStatus(jobId);
    options.onProgress?.(status);
    if (status.status !== 'running') {
      return status;
    }
    if (Date.now() - startedAt > timeoutMs) {
      throw new Error(`job ${jobId} still running after ${timeoutMs} ms`);
    }
    await doSleep(intervalMs);
  }
}
