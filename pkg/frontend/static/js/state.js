/** Pure state machine for the annotation loop. The reducer owns task order,
 * submission serialization, and error handling; the DOM layer only renders
 * whatever state it is handed. No client storage: reloading rebuilds the
 * identical state from the API. */
export const KEY_BINDINGS = {
    p: 'purposive',
    n: 'non_purposive',
    u: 'unclear',
};
export function initialState() {
    return {
        phase: 'loading',
        queue: [],
        progress: { total: 0, labeled: 0, pending: 0 },
        submitting: false,
        banner: null,
    };
}
export function currentTask(state) {
    return state.phase === 'annotating' ? state.queue[0] ?? null : null;
}
export function tasksLoaded(state, tasks, progress) {
    return {
        ...state,
        phase: tasks.length > 0 ? 'annotating' : 'complete',
        queue: tasks,
        progress,
        submitting: false,
    };
}
export function loadFailed(state, message) {
    return { ...state, phase: 'error', banner: message };
}
/** Returns null when no submission should start (wrong phase, already in
 * flight, or the key is not bound). */
export function submitStart(state, key) {
    const label = KEY_BINDINGS[key];
    const task = currentTask(state);
    if (!label || !task || state.submitting)
        return null;
    return {
        state: { ...state, submitting: true, banner: null },
        sampleId: task.sample_id,
        label,
    };
}
export function submitSucceeded(state, progress) {
    const queue = state.queue.slice(1);
    return {
        ...state,
        phase: queue.length > 0 ? 'annotating' : 'complete',
        queue,
        progress,
        submitting: false,
        banner: null,
    };
}
/** Failed submissions keep the task current so nothing is silently lost. */
export function submitFailed(state, message) {
    return { ...state, submitting: false, banner: message };
}
export function dismissBanner(state) {
    return { ...state, banner: null };
}
