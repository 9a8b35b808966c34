/** Adam with the usual bias correction; the LR schedule lives in train.ts. */

import { Tensor } from "./autograd.js";

export class Adam {
    private readonly params: Tensor[];
    private readonly m: Float32Array[];
    private readonly v: Float32Array[];
    private t = 0;

    constructor(
        params: Tensor[],
        readonly beta1 = 0.9,
        readonly beta2 = 0.999,
        readonly eps = 1e-8,
        readonly weightDecay = 0.01,
    ) {
        this.params = params;
        this.m = params.map(p => new Float32Array(p.data.length));
        this.v = params.map(p => new Float32Array(p.data.length));
    }

    step(lr: number): void {
        this.t += 1;
        const c1 = 1 - Math.pow(this.beta1, this.t);
        const c2 = 1 - Math.pow(this.beta2, this.t);
        for (let pi = 0; pi < this.params.length; pi++) {
            const p = this.params[pi];
            if (p.grad === null) continue;
            const m = this.m[pi];
            const v = this.v[pi];
            const g = p.grad;
            const data = p.data;
            for (let i = 0; i < data.length; i++) {
                const grad = g[i] + this.weightDecay * data[i];
                m[i] = this.beta1 * m[i] + (1 - this.beta1) * grad;
                v[i] = this.beta2 * v[i] + (1 - this.beta2) * grad * grad;
                data[i] -= lr * (m[i] / c1) / (Math.sqrt(v[i] / c2) + this.eps);
            }
        }
    }

    zeroGrad(): void {
        for (const p of this.params) p.zeroGrad();
    }
}
