import { describe, expect, it } from 'vitest'

import { ApiClient, ApiError } from '../src/api.js'

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  })
}

function recordingClient(response: Response) {
  const calls: { input: string; init?: RequestInit }[] = []
  const client = new ApiClient(async (input, init) => {
    calls.push({ input, init })
    return response
  })
  return { client, calls }
}

describe('ApiClient', () => {
  it('posts annotations with the expected body', async () => {
    const { client, calls } = recordingClient(
      jsonResponse(200, {
        sample_id: 't1',
        label: 'purposive',
        progress: { total: 5, labeled: 1, pending: 4 },
      }),
    )
    const result = await client.postAnnotation('t1', 'purposive')
    expect(calls).toHaveLength(1)
    expect(calls[0].input).toBe('/api/annotations')
    expect(calls[0].init?.method).toBe('POST')
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      sample_id: 't1',
      label: 'purposive',
    })
    expect(result.progress.labeled).toBe(1)
  })

  it('requests pending tasks and decade estimates by URL', async () => {
    const { client, calls } = recordingClient(jsonResponse(200, []))
    await client.getPendingTasks()
    expect(calls[0].input).toBe('/api/tasks?status=pending')
    await client.getEstimate(1900).catch(() => undefined)
    expect(calls[1].input).toBe('/api/estimate?decade=1900')
  })

  it('maps 4xx responses to ApiError with the server detail', async () => {
    const { client } = recordingClient(
      jsonResponse(409, { detail: 'sample not in session' }),
    )
    const err = await client.postAnnotation('zz', 'purposive').catch((e) => e)
    expect(err).toBeInstanceOf(ApiError)
    expect(err.status).toBe(409)
    expect(err.message).toBe('sample not in session')
  })

  it('maps fetch rejection to ApiError with status 0', async () => {
    const client = new ApiClient(async () => {
      throw new TypeError('connection refused')
    })
    const err = await client.getProgress().catch((e) => e)
    expect(err).toBeInstanceOf(ApiError)
    expect(err.status).toBe(0)
  })
})
