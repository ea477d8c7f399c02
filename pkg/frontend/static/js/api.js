/** Thin typed client for the annotation service. All science lives on the
 * server; this module only moves JSON and maps HTTP failures to ApiError. */
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class ApiClient {
    constructor(fetchFn = (input, init) => fetch(input, init), base = '') {
        this.fetchFn = fetchFn;
        this.base = base;
    }
    async request(path, init) {
        let response;
        try {
            response = await this.fetchFn(this.base + path, init);
        }
        catch (err) {
            throw new ApiError(0, `network error: ${String(err)}`);
        }
        let body = null;
        try {
            body = await response.json();
        }
        catch {
            // non-JSON error body; fall through with the status code alone
        }
        if (!response.ok) {
            const detail = body && typeof body === 'object' && 'detail' in body
                ? String(body.detail)
                : `HTTP ${response.status}`;
            throw new ApiError(response.status, detail);
        }
        return body;
    }
    getSession() {
        return this.request('/api/session');
    }
    getPendingTasks() {
        return this.request('/api/tasks?status=pending');
    }
    getProgress() {
        return this.request('/api/progress');
    }
    getEstimate(decade) {
        return this.request(`/api/estimate?decade=${decade}`);
    }
    postAnnotation(sampleId, label) {
        return this.request('/api/annotations', {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify({ sample_id: sampleId, label }),
        });
    }
}
