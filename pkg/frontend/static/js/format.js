/** Display formatting. Every number shown in the estimate grid comes from the
 * server response; the only client-side transformation is fixed two-decimal
 * rendering, so displayed figures match the server's values exactly. */
export function formatPmw(value) {
    return value === null ? '—' : value.toFixed(2);
}
export function estimateRow(estimate) {
    return {
        decade: String(estimate.decade),
        sampleSize: String(estimate.sample_size),
        kPurposive: String(estimate.k_purposive),
        totalPmw: formatPmw(estimate.total_pmw),
        purposivePmw: formatPmw(estimate.purposive_pmw),
        nonPurposivePmw: formatPmw(estimate.non_purposive_pmw),
    };
}
export function progressText(labeled, total) {
    return `${labeled} / ${total} labeled`;
}
