import { describe, expect, it } from 'vitest'

import type { Estimate } from '../src/api.js'
import { estimateRow, formatPmw, progressText } from '../src/format.js'

describe('formatPmw', () => {
  it('renders two decimals, matching server values character-for-character', () => {
    expect(formatPmw(13.8736)).toBe('13.87')
    expect(formatPmw(46.4464)).toBe('46.45')
    expect(formatPmw(60.32)).toBe('60.32')
    expect(formatPmw(0)).toBe('0.00')
    expect(formatPmw(7)).toBe('7.00')
  })

  it('renders a dash for decades with no usable labels yet', () => {
    expect(formatPmw(null)).toBe('—')
  })
})

describe('estimateRow', () => {
  it('formats a 23/100 split the way the estimator reports it', () => {
    const estimate: Estimate = {
      decade: 1900,
      sample_size: 100,
      k_purposive: 23,
      total_pmw: 60.32,
      purposive_pmw: 60.32 * 0.23,
      non_purposive_pmw: 60.32 * 0.77,
    }
    expect(estimateRow(estimate)).toEqual({
      decade: '1900',
      sampleSize: '100',
      kPurposive: '23',
      totalPmw: '60.32',
      purposivePmw: '13.87',
      nonPurposivePmw: '46.45',
    })
  })

  it('leaves numbers untouched apart from formatting (no recomputation)', () => {
    const estimate: Estimate = {
      decade: 2000,
      sample_size: 4,
      k_purposive: 1,
      total_pmw: 153.92,
      purposive_pmw: 38.48,
      non_purposive_pmw: 115.44,
    }
    const row = estimateRow(estimate)
    expect(row.purposivePmw).toBe((38.48).toFixed(2))
    expect(row.nonPurposivePmw).toBe((115.44).toFixed(2))
  })
})

describe('progressText', () => {
  it('shows labeled over total', () => {
    expect(progressText(23, 100)).toBe('23 / 100 labeled')
  })
})
