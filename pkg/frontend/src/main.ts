/** DOM glue: wires the keyboard to the state machine and renders state into
 * the static page. Kept deliberately thin — everything testable lives in
 * api.ts / state.ts / format.ts. */

import { ApiClient, ApiError } from './api.js'
import { estimateRow, formatPmw, progressText } from './format.js'
import {
  AppState,
  currentTask,
  initialState,
  loadFailed,
  submitFailed,
  submitStart,
  submitSucceeded,
  tasksLoaded,
} from './state.js'

const api = new ApiClient()
let state: AppState = initialState()
let decades: number[] = []

function el(id: string): HTMLElement {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing element #${id}`)
  return node
}

function setState(next: AppState): void {
  state = next
  render()
}

function render(): void {
  const task = currentTask(state)
  el('loading').hidden = state.phase !== 'loading'
  el('task-card').hidden = task === null
  el('complete').hidden = state.phase !== 'complete'
  el('progress').textContent = progressText(state.progress.labeled, state.progress.total)

  const banner = el('banner')
  banner.hidden = state.banner === null
  banner.textContent = state.banner ?? ''

  if (task) {
    el('kwic-left').textContent = task.left
    el('kwic-hit').textContent = task.hit
    el('kwic-right').textContent = task.right
    el('task-meta').textContent = `${task.doc_id} · decade ${task.decade}`
  }
}

async function renderEstimates(): Promise<void> {
  const tbody = el('estimate-body')
  const badge = el('estimate-stale')
  try {
    const estimates = await Promise.all(decades.map((d) => api.getEstimate(d)))
    tbody.replaceChildren(
      ...estimates.map((estimate) => {
        const row = estimateRow(estimate)
        const tr = document.createElement('tr')
        for (const cell of [row.decade, row.sampleSize, row.kPurposive,
                            row.totalPmw, row.purposivePmw, row.nonPurposivePmw]) {
          const td = document.createElement('td')
          td.textContent = cell
          tr.appendChild(td)
        }
        return tr
      }),
    )
    badge.hidden = true
  } catch {
    badge.hidden = false
  }
}

async function onKey(event: KeyboardEvent): Promise<void> {
  const started = submitStart(state, event.key.toLowerCase())
  if (!started) return
  event.preventDefault()
  setState(started.state)
  try {
    const result = await api.postAnnotation(started.sampleId, started.label)
    setState(submitSucceeded(state, result.progress))
    await renderEstimates()
  } catch (err) {
    const message = err instanceof ApiError ? err.message : String(err)
    setState(submitFailed(state, message))
  }
}

async function boot(): Promise<void> {
  render()
  try {
    const session = await api.getSession()
    decades = session.decades
    el('session-id').textContent = session.session_id
    const [tasks, progress] = await Promise.all([api.getPendingTasks(), api.getProgress()])
    setState(tasksLoaded(state, tasks, progress))
    await renderEstimates()
  } catch (err) {
    const message = err instanceof ApiError ? err.message : String(err)
    setState(loadFailed(state, `failed to load session: ${message}`))
  }
}

window.addEventListener('keydown', (event) => void onKey(event))
window.addEventListener('load', () => void boot())

export { formatPmw }
