/**
 * Minimal reverse-mode autograd over 2-D Float32Array tensors.
 *
 * Every op records a backward closure; Tensor.backward() walks the graph
 * in reverse topological order. Matrices are row-major [rows, cols]. The
 * matmul inner loops use the i-k-j order so the right operand streams
 * row-wise, which is what keeps pure-JS training tolerable.
 */

export class Tensor {
    data: Float32Array;
    readonly rows: number;
    readonly cols: number;
    grad: Float32Array | null = null;
    requiresGrad: boolean;
    parents: Tensor[] = [];
    backwardFn: (() => void) | null = null;

    constructor(rows: number, cols: number, data?: Float32Array, requiresGrad = false) {
        this.rows = rows;
        this.cols = cols;
        this.data = data ?? new Float32Array(rows * cols);
        this.requiresGrad = requiresGrad;
    }

    static param(rows: number, cols: number, init: (i: number) => number): Tensor {
        const t = new Tensor(rows, cols, undefined, true);
        for (let i = 0; i < t.data.length; i++) t.data[i] = init(i);
        return t;
    }

    static fromArray(rows: number, cols: number, values: ArrayLike<number>): Tensor {
        return new Tensor(rows, cols, Float32Array.from(values as number[]));
    }

    ensureGrad(): Float32Array {
        if (this.grad === null) this.grad = new Float32Array(this.data.length);
        return this.grad;
    }

    zeroGrad(): void {
        if (this.grad !== null) this.grad.fill(0);
    }

    item(): number {
        if (this.data.length !== 1) throw new Error("item() needs a 1x1 tensor");
        return this.data[0];
    }

    /** Reverse topological walk from this (scalar) tensor. */
    backward(): void {
        const order: Tensor[] = [];
        const seen = new Set<Tensor>();
        const visit = (t: Tensor) => {
            if (seen.has(t)) return;
            seen.add(t);
            for (const p of t.parents) visit(p);
            order.push(t);
        };
        visit(this);
        this.ensureGrad().fill(1);
        for (let i = order.length - 1; i >= 0; i--) {
            order[i].backwardFn?.();
        }
    }
}

function track(out: Tensor, parents: Tensor[], backwardFn: () => void): Tensor {
    if (parents.some(p => p.requiresGrad)) {
        out.requiresGrad = true;
        out.parents = parents;
        out.backwardFn = backwardFn;
    }
    return out;
}

function matmulInto(
    a: Float32Array, m: number, k: number,
    b: Float32Array, n: number,
    out: Float32Array, accumulate: boolean,
): void {
    if (!accumulate) out.fill(0);
    for (let i = 0; i < m; i++) {
        const ai = i * k;
        const ci = i * n;
        for (let p = 0; p < k; p++) {
            const av = a[ai + p];
            if (av === 0) continue;
            const bp = p * n;
            for (let j = 0; j < n; j++) out[ci + j] += av * b[bp + j];
        }
    }
}

/** out[m,n] (+)= A[m,k] x B[n,k]^T */
function matmulTransBInto(
    a: Float32Array, m: number, k: number,
    b: Float32Array, n: number,
    out: Float32Array, accumulate: boolean,
): void {
    if (!accumulate) out.fill(0);
    for (let i = 0; i < m; i++) {
        const ai = i * k;
        for (let j = 0; j < n; j++) {
            const bj = j * k;
            let s = 0;
            for (let p = 0; p < k; p++) s += a[ai + p] * b[bj + p];
            out[i * n + j] += s;
        }
    }
}

/** out[k,n] (+)= A[m,k]^T x B[m,n] */
function matmulTransAInto(
    a: Float32Array, m: number, k: number,
    b: Float32Array, n: number,
    out: Float32Array,
): void {
    for (let i = 0; i < m; i++) {
        const ai = i * k;
        const bi = i * n;
        for (let p = 0; p < k; p++) {
            const av = a[ai + p];
            if (av === 0) continue;
            const op = p * n;
            for (let j = 0; j < n; j++) out[op + j] += av * b[bi + j];
        }
    }
}

/** C = A x B */
export function matmul(a: Tensor, b: Tensor): Tensor {
    if (a.cols !== b.rows) throw new Error(`matmul shape mismatch ${a.cols} vs ${b.rows}`);
    const out = new Tensor(a.rows, b.cols);
    matmulInto(a.data, a.rows, a.cols, b.data, b.cols, out.data, false);
    return track(out, [a, b], () => {
        const g = out.grad!;
        if (a.requiresGrad) {
            matmulTransBInto(g, a.rows, b.cols, b.data, b.rows, a.ensureGrad(), true);
        }
        if (b.requiresGrad) {
            matmulTransAInto(a.data, a.rows, a.cols, g, b.cols, b.ensureGrad());
        }
    });
}

/** C = A x B^T (B stored [n,k]); used for attention scores and the output head. */
export function matmulTransB(a: Tensor, b: Tensor): Tensor {
    if (a.cols !== b.cols) throw new Error(`matmulTransB shape mismatch ${a.cols} vs ${b.cols}`);
    const out = new Tensor(a.rows, b.rows);
    matmulTransBInto(a.data, a.rows, a.cols, b.data, b.rows, out.data, false);
    return track(out, [a, b], () => {
        const g = out.grad!;
        if (a.requiresGrad) {
            matmulInto(g, a.rows, b.rows, b.data, b.cols, a.ensureGrad(), true);
        }
        if (b.requiresGrad) {
            matmulTransAInto(g, a.rows, b.rows, a.data, a.cols, b.ensureGrad());
        }
    });
}

export function add(a: Tensor, b: Tensor): Tensor {
    if (a.rows !== b.rows || a.cols !== b.cols) throw new Error("add shape mismatch");
    const out = new Tensor(a.rows, a.cols);
    for (let i = 0; i < out.data.length; i++) out.data[i] = a.data[i] + b.data[i];
    return track(out, [a, b], () => {
        const g = out.grad!;
        if (a.requiresGrad) {
            const ga = a.ensureGrad();
            for (let i = 0; i < g.length; i++) ga[i] += g[i];
        }
        if (b.requiresGrad) {
            const gb = b.ensureGrad();
            for (let i = 0; i < g.length; i++) gb[i] += g[i];
        }
    });
}

/** Add a [1,c] bias row to every row of A. */
export function addBias(a: Tensor, bias: Tensor): Tensor {
    if (bias.rows !== 1 || bias.cols !== a.cols) throw new Error("addBias shape mismatch");
    const out = new Tensor(a.rows, a.cols);
    for (let i = 0; i < a.rows; i++) {
        const off = i * a.cols;
        for (let j = 0; j < a.cols; j++) out.data[off + j] = a.data[off + j] + bias.data[j];
    }
    return track(out, [a, bias], () => {
        const g = out.grad!;
        if (a.requiresGrad) {
            const ga = a.ensureGrad();
            for (let i = 0; i < g.length; i++) ga[i] += g[i];
        }
        if (bias.requiresGrad) {
            const gb = bias.ensureGrad();
            for (let i = 0; i < a.rows; i++) {
                const off = i * a.cols;
                for (let j = 0; j < a.cols; j++) gb[j] += g[off + j];
            }
        }
    });
}

export function scale(a: Tensor, s: number): Tensor {
    const out = new Tensor(a.rows, a.cols);
    for (let i = 0; i < a.data.length; i++) out.data[i] = a.data[i] * s;
    return track(out, [a], () => {
        if (a.requiresGrad) {
            const ga = a.ensureGrad();
            const g = out.grad!;
            for (let i = 0; i < g.length; i++) ga[i] += g[i] * s;
        }
    });
}

export function relu(a: Tensor): Tensor {
    const out = new Tensor(a.rows, a.cols);
    for (let i = 0; i < a.data.length; i++) out.data[i] = a.data[i] > 0 ? a.data[i] : 0;
    return track(out, [a], () => {
        if (a.requiresGrad) {
            const ga = a.ensureGrad();
            const g = out.grad!;
            for (let i = 0; i < g.length; i++) if (a.data[i] > 0) ga[i] += g[i];
        }
    });
}

export function softmaxRows(a: Tensor): Tensor {
    const out = new Tensor(a.rows, a.cols);
    const n = a.cols;
    for (let i = 0; i < a.rows; i++) {
        const off = i * n;
        let max = -Infinity;
        for (let j = 0; j < n; j++) if (a.data[off + j] > max) max = a.data[off + j];
        let sum = 0;
        for (let j = 0; j < n; j++) {
            const e = Math.exp(a.data[off + j] - max);
            out.data[off + j] = e;
            sum += e;
        }
        for (let j = 0; j < n; j++) out.data[off + j] /= sum;
    }
    return track(out, [a], () => {
        if (!a.requiresGrad) return;
        const ga = a.ensureGrad();
        const g = out.grad!;
        for (let i = 0; i < a.rows; i++) {
            const off = i * n;
            let dot = 0;
            for (let j = 0; j < n; j++) dot += g[off + j] * out.data[off + j];
            for (let j = 0; j < n; j++) {
                ga[off + j] += out.data[off + j] * (g[off + j] - dot);
            }
        }
    });
}

/** Per-row layer norm with learned gain/bias rows [1,c]. */
export function layerNorm(a: Tensor, gain: Tensor, bias: Tensor, eps = 1e-5): Tensor {
    const n = a.cols;
    const out = new Tensor(a.rows, n);
    const xhat = new Float32Array(a.rows * n);
    const invStd = new Float32Array(a.rows);
    for (let i = 0; i < a.rows; i++) {
        const off = i * n;
        let mean = 0;
        for (let j = 0; j < n; j++) mean += a.data[off + j];
        mean /= n;
        let variance = 0;
        for (let j = 0; j < n; j++) {
            const d = a.data[off + j] - mean;
            variance += d * d;
        }
        variance /= n;
        const inv = 1 / Math.sqrt(variance + eps);
        invStd[i] = inv;
        for (let j = 0; j < n; j++) {
            const xh = (a.data[off + j] - mean) * inv;
            xhat[off + j] = xh;
            out.data[off + j] = xh * gain.data[j] + bias.data[j];
        }
    }
    return track(out, [a, gain, bias], () => {
        const g = out.grad!;
        if (gain.requiresGrad) {
            const gg = gain.ensureGrad();
            for (let i = 0; i < a.rows; i++) {
                const off = i * n;
                for (let j = 0; j < n; j++) gg[j] += g[off + j] * xhat[off + j];
            }
        }
        if (bias.requiresGrad) {
            const gb = bias.ensureGrad();
            for (let i = 0; i < a.rows; i++) {
                const off = i * n;
                for (let j = 0; j < n; j++) gb[j] += g[off + j];
            }
        }
        if (a.requiresGrad) {
            const ga = a.ensureGrad();
            for (let i = 0; i < a.rows; i++) {
                const off = i * n;
                let sumDy = 0;
                let sumDyXhat = 0;
                for (let j = 0; j < n; j++) {
                    const dy = g[off + j] * gain.data[j];
                    sumDy += dy;
                    sumDyXhat += dy * xhat[off + j];
                }
                for (let j = 0; j < n; j++) {
                    const dy = g[off + j] * gain.data[j];
                    ga[off + j] += invStd[i] * (dy - sumDy / n - xhat[off + j] * sumDyXhat / n);
                }
            }
        }
    });
}

/** Column slice [from, to) as a copy. */
export function sliceCols(a: Tensor, from: number, to: number): Tensor {
    const w = to - from;
    const out = new Tensor(a.rows, w);
    for (let i = 0; i < a.rows; i++) {
        out.data.set(a.data.subarray(i * a.cols + from, i * a.cols + to), i * w);
    }
    return track(out, [a], () => {
        if (!a.requiresGrad) return;
        const ga = a.ensureGrad();
        const g = out.grad!;
        for (let i = 0; i < a.rows; i++) {
            const go = i * w;
            const ao = i * a.cols + from;
            for (let j = 0; j < w; j++) ga[ao + j] += g[go + j];
        }
    });
}

export function concatCols(parts: Tensor[]): Tensor {
    const rows = parts[0].rows;
    const total = parts.reduce((s, p) => s + p.cols, 0);
    const out = new Tensor(rows, total);
    let off = 0;
    for (const p of parts) {
        for (let i = 0; i < rows; i++) {
            out.data.set(p.data.subarray(i * p.cols, (i + 1) * p.cols), i * total + off);
        }
        off += p.cols;
    }
    return track(out, parts, () => {
        const g = out.grad!;
        let colOff = 0;
        for (const p of parts) {
            if (p.requiresGrad) {
                const gp = p.ensureGrad();
                for (let i = 0; i < rows; i++) {
                    const go = i * total + colOff;
                    const po = i * p.cols;
                    for (let j = 0; j < p.cols; j++) gp[po + j] += g[go + j];
                }
            }
            colOff += p.cols;
        }
    });
}

/** Rows of an embedding table selected by ids; backward scatter-adds. */
export function gatherRows(table: Tensor, ids: Int32Array): Tensor {
    const out = new Tensor(ids.length, table.cols);
    for (let i = 0; i < ids.length; i++) {
        out.data.set(table.data.subarray(ids[i] * table.cols, (ids[i] + 1) * table.cols), i * table.cols);
    }
    return track(out, [table], () => {
        if (!table.requiresGrad) return;
        const gt = table.ensureGrad();
        const g = out.grad!;
        for (let i = 0; i < ids.length; i++) {
            const to = ids[i] * table.cols;
            const go = i * table.cols;
            for (let j = 0; j < table.cols; j++) gt[to + j] += g[go + j];
        }
    });
}

/**
 * Masked-position cross entropy, fused with the vocab projection.
 *
 * For each labeled position p: logits = W h_p + b over the vocabulary,
 * loss_p = -log softmax(logits)[target_p]. Returns the scalar mean over
 * positions. Computing the projection only at labeled positions is what
 * keeps step cost independent of sequence length on the output side.
 */
export function maskedCrossEntropy(
    hidden: Tensor,
    proj: Tensor, // [V, d]
    bias: Tensor, // [1, V]
    positions: Int32Array,
    targets: Int32Array,
): Tensor {
    const d = hidden.cols;
    const v = proj.rows;
    const nPos = positions.length;
    const out = new Tensor(1, 1);
    if (nPos === 0) {
        return track(out, [hidden, proj, bias], () => undefined);
    }
    const probs = new Float32Array(nPos * v);
    let total = 0;
    for (let i = 0; i < nPos; i++) {
        const h = positions[i] * d;
        const row = i * v;
        let max = -Infinity;
        for (let t = 0; t < v; t++) {
            const to = t * d;
            let s = bias.data[t];
            for (let j = 0; j < d; j++) s += proj.data[to + j] * hidden.data[h + j];
            probs[row + t] = s;
            if (s > max) max = s;
        }
        let sum = 0;
        for (let t = 0; t < v; t++) {
            const e = Math.exp(probs[row + t] - max);
            probs[row + t] = e;
            sum += e;
        }
        for (let t = 0; t < v; t++) probs[row + t] /= sum;
        total += -Math.log(Math.max(probs[row + targets[i]], 1e-12));
    }
    out.data[0] = total / nPos;
    return track(out, [hidden, proj, bias], () => {
        const gScale = out.grad![0] / nPos;
        const gh = hidden.requiresGrad ? hidden.ensureGrad() : null;
        const gw = proj.requiresGrad ? proj.ensureGrad() : null;
        const gb = bias.requiresGrad ? bias.ensureGrad() : null;
        for (let i = 0; i < nPos; i++) {
            const h = positions[i] * d;
            const row = i * v;
            const target = targets[i];
            for (let t = 0; t < v; t++) {
                const dLogit = (probs[row + t] - (t === target ? 1 : 0)) * gScale;
                if (dLogit === 0) continue;
                const to = t * d;
                if (gb) gb[t] += dLogit;
                if (gh) {
                    for (let j = 0; j < d; j++) gh[h + j] += dLogit * proj.data[to + j];
                }
                if (gw) {
                    for (let j = 0; j < d; j++) gw[to + j] += dLogit * hidden.data[h + j];
                }
            }
        }
    });
}
