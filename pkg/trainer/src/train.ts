/**
 * MLM training over a masked-example stream, in stream order.
 *
 * The stream order *is* the curriculum: the masker already interleaved
 * warmup and stage examples, so the trainer just consumes batches front
 * to back and tags each logged loss with the stage of its examples. Loss
 * is computed only at labeled positions; an example with no labels
 * contributes nothing.
 */

import { Adam } from "./adam.js";
import { MaskedExample, batches } from "./jsonl.js";
import { DEFAULT_DIMS, MlmModel } from "./model.js";
import { Vocab } from "./vocab.js";

export interface TrainRunConfig {
    layers: number;
    hidden: number;
    heads: number;
    ffn: number;
    batchSize: number;
    peakLr: number;
    warmupFraction: number; // of total steps, for linear LR warmup then decay
    maxSteps: number | null; // cap; null = one pass over the stream
    seed: number;
    logInterval: number;
}

export const DEFAULT_TRAIN_CONFIG: TrainRunConfig = {
    ...DEFAULT_DIMS,
    batchSize: 8,
    peakLr: 1e-3,
    warmupFraction: 0.1,
    maxSteps: null,
    seed: 0,
    logInterval: 1,
};

export interface LossRecord {
    step: number;
    stage: number;
    loss: number;
}

export interface TrainResult {
    log: LossRecord[];
    model: MlmModel;
}

export function linearWarmupDecay(step: number, total: number, peak: number, warmupFraction: number): number {
    const warmup = Math.max(1, Math.floor(total * warmupFraction));
    if (step < warmup) return (peak * (step + 1)) / warmup;
    const rest = Math.max(1, total - warmup);
    return Math.max(0, peak * (1 - (step - warmup) / rest));
}

export function train(
    examples: MaskedExample[],
    vocab: Vocab,
    cfg: TrainRunConfig = DEFAULT_TRAIN_CONFIG,
    onProgress?: (r: LossRecord) => void,
): TrainResult {
    if (examples.length === 0) throw new Error("no training examples");
    const available = Math.floor(examples.length / cfg.batchSize);
    let totalSteps = available;
    if (cfg.maxSteps !== null) {
        if (cfg.maxSteps > available) {
            console.warn(
                `requested ${cfg.maxSteps} steps but the stream holds ${available} batches; training one pass`,
            );
        }
        totalSteps = Math.min(cfg.maxSteps, available);
    }
    const maxSeq = Math.max(...examples.map(e => e.corrupted.length));
    const model = new MlmModel(
        {
            vocabSize: vocab.size,
            maxSeq,
            hidden: cfg.hidden,
            layers: cfg.layers,
            heads: cfg.heads,
            ffn: cfg.ffn,
        },
        cfg.seed,
    );
    const optimizer = new Adam(model.parameters());
    const log: LossRecord[] = [];

    let step = 0;
    for (const batch of batches(examples, cfg.batchSize)) {
        if (step >= totalSteps) break;
        optimizer.zeroGrad();
        let lossSum = 0;
        let nWithLabels = 0;
        for (const ex of batch) {
            if (ex.labels.length === 0) continue;
            const ids = vocab.encode(ex.corrupted);
            const positions = Int32Array.from(ex.labels.map(l => l.pos));
            const targets = Int32Array.from(ex.labels.map(l => vocab.id(l.original_token)));
            const loss = model.loss(ids, positions, targets);
            loss.backward();
            lossSum += loss.item();
            nWithLabels += 1;
        }
        if (nWithLabels > 0) {
            // average the accumulated gradients over the batch
            for (const p of model.parameters()) {
                if (p.grad) {
                    for (let i = 0; i < p.grad.length; i++) p.grad[i] /= nWithLabels;
                }
            }
            optimizer.step(linearWarmupDecay(step, totalSteps, cfg.peakLr, cfg.warmupFraction));
        }
        if (step % cfg.logInterval === 0 && nWithLabels > 0) {
            const record = { step, stage: batch[0].stage, loss: lossSum / nWithLabels };
            log.push(record);
            onProgress?.(record);
        }
        step += 1;
    }
    return { log, model };
}

export function lossLogToCsv(log: LossRecord[]): string {
    const lines = ["step,stage,loss"];
    for (const r of log) lines.push(`${r.step},${r.stage},${r.loss.toFixed(6)}`);
    return lines.join("\n") + "\n";
}
