/** Thin fetch client for the service; every number shown in the console is
 * a pure rendering of these responses. */

import type {
  BoundsRequest,
  JobStatus,
  ModelListEntry,
  ModelSchema,
  QueryRequest,
  QueryResponse,
} from './types';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<ApiError> {
  let code = 'error';
  let message = `${response.status}`;
  try {
    const body = await response.json();
    const detail = body?.detail;
    if (typeof detail === 'string') {
      message = detail;
    } else if (detail) {
      code = detail.code ?? code;
      message = detail.message ?? message;
    }
  } catch {
    // non-JSON body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  listModels(): Promise<ModelListEntry[]> {
    return this.request('/models');
  }

  schema(modelId: string): Promise<ModelSchema> {
    return this.request(`/models/${encodeURIComponent(modelId)}/schema`);
  }

  query(modelId: string, body: QueryRequest): Promise<QueryResponse> {
    return this.request(`/models/${encodeURIComponent(modelId)}/query`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  startBounds(modelId: string, body: BoundsRequest): Promise<{ job: string }> {
    return this.request(`/models/${encodeURIComponent(modelId)}/bounds`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request(`/jobs/${encodeURIComponent(jobId)}`);
  }

  cancelJob(jobId: string): Promise<unknown> {
    return this.request(`/jobs/${encodeURIComponent(jobId)}`, { method: 'DELETE' });
  }
}
