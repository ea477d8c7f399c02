/** Display formatting. Every number shown in the estimate grid comes from the
 * server response; the only client-side transformation is fixed two-decimal
 * rendering, so displayed figures match the server's values exactly. */

import type { Estimate } from './api.js'

export function formatPmw(value: number | null): string {
  return value === null ? '—' : value.toFixed(2)
}

export interface EstimateRow {
  decade: string
  sampleSize: string
  kPurposive: string
  totalPmw: string
  purposivePmw: string
  nonPurposivePmw: string
}

export function estimateRow(estimate: Estimate): EstimateRow {
  return {
    decade: String(estimate.decade),
    sampleSize: String(estimate.sample_size),
    kPurposive: String(estimate.k_purposive),
    totalPmw: formatPmw(estimate.total_pmw),
    purposivePmw: formatPmw(estimate.purposive_pmw),
    nonPurposivePmw: formatPmw(estimate.non_purposive_pmw),
  }
}

export function progressText(labeled: number, total: number): string {
  return `${labeled} / ${total} labeled`
}
