/** Thin typed client for the annotation service. All science lives on the
 * server; this module only moves JSON and maps HTTP failures to ApiError. */

export type Label = 'purposive' | 'non_purposive' | 'unclear'

export interface TaskView {
  sample_id: string
  left: string
  hit: string
  right: string
  decade: number
  doc_id: string
  status: 'pending' | 'labeled'
}

export interface SessionInfo {
  session_id: string
  patterns: string[]
  seed: number
  corpus_hash: string
  decades: number[]
}

export interface Estimate {
  decade: number
  sample_size: number
  k_purposive: number
  total_pmw: number
  purposive_pmw: number | null
  non_purposive_pmw: number | null
}

export interface Progress {
  total: number
  labeled: number
  pending: number
}

export interface AnnotationResult {
  sample_id: string
  label: Label
  progress: Progress
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message)
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
  constructor(
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
    private base = '',
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response
    try {
      response = await this.fetchFn(this.base + path, init)
    } catch (err) {
      throw new ApiError(0, `network error: ${String(err)}`)
    }
    let body: unknown = null
    try {
      body = await response.json()
    } catch {
      // non-JSON error body; fall through with the status code alone
    }
    if (!response.ok) {
      const detail =
        body && typeof body === 'object' && 'detail' in body
          ? String((body as { detail: unknown }).detail)
          : `HTTP ${response.status}`
      throw new ApiError(response.status, detail)
    }
    return body as T
  }

  getSession(): Promise<SessionInfo> {
    return this.request('/api/session')
  }

  getPendingTasks(): Promise<TaskView[]> {
    return this.request('/api/tasks?status=pending')
  }

  getProgress(): Promise<Progress> {
    return this.request('/api/progress')
  }

  getEstimate(decade: number): Promise<Estimate> {
    return this.request(`/api/estimate?decade=${decade}`)
  }

  postAnnotation(sampleId: string, label: Label): Promise<AnnotationResult> {
    return this.request('/api/annotations', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ sample_id: sampleId, label }),
    })
  }
}
