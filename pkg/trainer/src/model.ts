/**
 * A small bidirectional transformer encoder for masked-token prediction.
 *
 * Pre-LN blocks: x + Attn(LN(x)), then x + FFN(LN(x)); learned positional
 * embeddings; untied output projection applied only at labeled positions.
 * Defaults (2 layers, 128 hidden, 2 heads) are deliberately tiny: the
 * trainer exists to measure loss ordering across curriculum stages, not
 * to reach any absolute quality bar.
 */

import {
    Tensor,
    add,
    addBias,
    concatCols,
    gatherRows,
    layerNorm,
    maskedCrossEntropy,
    matmul,
    matmulTransB,
    relu,
    scale,
    sliceCols,
    softmaxRows,
} from "./autograd.js";
import { Rng } from "./rng.js";

export interface ModelConfig {
    vocabSize: number;
    maxSeq: number;
    hidden: number;
    layers: number;
    heads: number;
    ffn: number;
}

export const DEFAULT_DIMS = { hidden: 128, layers: 2, heads: 2, ffn: 256 };

interface LayerWeights {
    wq: Tensor; bq: Tensor;
    wk: Tensor; bk: Tensor;
    wv: Tensor; bv: Tensor;
    wo: Tensor; bo: Tensor;
    norm1Gain: Tensor; norm1Bias: Tensor;
    norm2Gain: Tensor; norm2Bias: Tensor;
    fc1: Tensor; bf1: Tensor;
    fc2: Tensor; bf2: Tensor;
}

export class MlmModel {
    readonly config: ModelConfig;
    readonly tokenEmb: Tensor;
    readonly posEmb: Tensor;
    readonly layers: LayerWeights[];
    readonly finalGain: Tensor;
    readonly finalBias: Tensor;
    readonly headProj: Tensor; // [V, d]
    readonly headBias: Tensor; // [1, V]

    constructor(config: ModelConfig, seed = 0) {
        if (config.hidden % config.heads !== 0) {
            throw new Error("hidden size must divide evenly into heads");
        }
        this.config = config;
        const rng = new Rng(seed);
        const init = () => rng.gauss(0, 0.02);
        const d = config.hidden;

        this.tokenEmb = Tensor.param(config.vocabSize, d, init);
        this.posEmb = Tensor.param(config.maxSeq, d, init);
        this.layers = [];
        for (let l = 0; l < config.layers; l++) {
            this.layers.push({
                wq: Tensor.param(d, d, init), bq: Tensor.param(1, d, () => 0),
                wk: Tensor.param(d, d, init), bk: Tensor.param(1, d, () => 0),
                wv: Tensor.param(d, d, init), bv: Tensor.param(1, d, () => 0),
                wo: Tensor.param(d, d, init), bo: Tensor.param(1, d, () => 0),
                norm1Gain: Tensor.param(1, d, () => 1), norm1Bias: Tensor.param(1, d, () => 0),
                norm2Gain: Tensor.param(1, d, () => 1), norm2Bias: Tensor.param(1, d, () => 0),
                fc1: Tensor.param(d, config.ffn, init), bf1: Tensor.param(1, config.ffn, () => 0),
                fc2: Tensor.param(config.ffn, d, init), bf2: Tensor.param(1, d, () => 0),
            });
        }
        this.finalGain = Tensor.param(1, d, () => 1);
        this.finalBias = Tensor.param(1, d, () => 0);
        this.headProj = Tensor.param(config.vocabSize, d, init);
        this.headBias = Tensor.param(1, config.vocabSize, () => 0);
    }

    parameters(): Tensor[] {
        const params: Tensor[] = [this.tokenEmb, this.posEmb, this.finalGain, this.finalBias, this.headProj, this.headBias];
        for (const l of this.layers) {
            params.push(
                l.wq, l.bq, l.wk, l.bk, l.wv, l.bv, l.wo, l.bo,
                l.norm1Gain, l.norm1Bias, l.norm2Gain, l.norm2Bias,
                l.fc1, l.bf1, l.fc2, l.bf2,
            );
        }
        return params;
    }

    parameterCount(): number {
        return this.parameters().reduce((s, p) => s + p.data.length, 0);
    }

    /** Final hidden states [T, d] for one token-id sequence. */
    encode(ids: Int32Array): Tensor {
        const T = ids.length;
        if (T > this.config.maxSeq) {
            throw new Error(`sequence length ${T} exceeds maxSeq ${this.config.maxSeq}`);
        }
        const posIds = new Int32Array(T);
        for (let i = 0; i < T; i++) posIds[i] = i;
        let x = add(gatherRows(this.tokenEmb, ids), gatherRows(this.posEmb, posIds));

        const heads = this.config.heads;
        const headDim = this.config.hidden / heads;
        for (const l of this.layers) {
            const n1 = layerNorm(x, l.norm1Gain, l.norm1Bias);
            const q = addBias(matmul(n1, l.wq), l.bq);
            const k = addBias(matmul(n1, l.wk), l.bk);
            const v = addBias(matmul(n1, l.wv), l.bv);
            const ctx: Tensor[] = [];
            for (let h = 0; h < heads; h++) {
                const from = h * headDim;
                const to = from + headDim;
                const qh = sliceCols(q, from, to);
                const kh = sliceCols(k, from, to);
                const vh = sliceCols(v, from, to);
                const scores = scale(matmulTransB(qh, kh), 1 / Math.sqrt(headDim));
                const attn = softmaxRows(scores);
                ctx.push(matmul(attn, vh));
            }
            x = add(x, addBias(matmul(concatCols(ctx), l.wo), l.bo));
            const n2 = layerNorm(x, l.norm2Gain, l.norm2Bias);
            const ff = addBias(matmul(relu(addBias(matmul(n2, l.fc1), l.bf1)), l.fc2), l.bf2);
            x = add(x, ff);
        }
        return layerNorm(x, this.finalGain, this.finalBias);
    }

    /** Mean cross entropy over the labeled positions of one sequence. */
    loss(ids: Int32Array, positions: Int32Array, targets: Int32Array): Tensor {
        return maskedCrossEntropy(this.encode(ids), this.headProj, this.headBias, positions, targets);
    }
}
