/**
 * Per-stage loss statistics and the stage-vs-difficulty rank correlation.
 *
 * The curriculum claims an easy-to-difficult ordering; the check is the
 * Spearman correlation between stage index (warmup excluded) and mean
 * training loss per stage. Strictly positive = losses rise with stage.
 */

import { LossRecord } from "./train.js";

export interface StageStats {
    stage: number;
    n: number;
    mean: number;
    std: number;
}

export interface StageSummary {
    stages: StageStats[];
    spearman: number; // stage index vs mean loss, curriculum stages only
}

function ranks(values: number[]): number[] {
    const order = values.map((v, i) => [v, i] as const).sort((a, b) => a[0] - b[0]);
    const out = new Array<number>(values.length);
    let i = 0;
    while (i < order.length) {
        let j = i;
        while (j + 1 < order.length && order[j + 1][0] === order[i][0]) j++;
        const rank = (i + j) / 2 + 1; // average rank for ties
        for (let k = i; k <= j; k++) out[order[k][1]] = rank;
        i = j + 1;
    }
    return out;
}

/** Spearman rank correlation; 0 when either side has no variation. */
export function spearman(xs: number[], ys: number[]): number {
    if (xs.length !== ys.length || xs.length < 2) return 0;
    const rx = ranks(xs);
    const ry = ranks(ys);
    const mean = (a: number[]) => a.reduce((s, v) => s + v, 0) / a.length;
    const mx = mean(rx);
    const my = mean(ry);
    let cov = 0;
    let vx = 0;
    let vy = 0;
    for (let i = 0; i < rx.length; i++) {
        const dx = rx[i] - mx;
        const dy = ry[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx === 0 || vy === 0) return 0;
    return cov / Math.sqrt(vx * vy);
}

export function stageLossSummary(log: LossRecord[]): StageSummary {
    if (log.length === 0) throw new Error("empty loss log");
    const byStage = new Map<number, number[]>();
    for (const r of log) {
        const bucket = byStage.get(r.stage);
        if (bucket) bucket.push(r.loss);
        else byStage.set(r.stage, [r.loss]);
    }
    const stages: StageStats[] = [...byStage.entries()]
        .sort((a, b) => a[0] - b[0])
        .map(([stage, losses]) => {
            const mean = losses.reduce((s, v) => s + v, 0) / losses.length;
            const variance = losses.reduce((s, v) => s + (v - mean) ** 2, 0) / losses.length;
            return { stage, n: losses.length, mean, std: Math.sqrt(variance) };
        });
    const curriculum = stages.filter(s => s.stage >= 1);
    const rho = spearman(curriculum.map(s => s.stage), curriculum.map(s => s.mean));
    return { stages, spearman: rho };
}

export function formatSummary(summary: StageSummary): string {
    const lines = ["stage  n      mean    +/- std"];
    for (const s of summary.stages) {
        const name = s.stage === 0 ? "warmup" : `stage ${s.stage}`;
        lines.push(`${name.padEnd(8)}${String(s.n).padEnd(7)}${s.mean.toFixed(4)}  ${s.std.toFixed(4)}`);
    }
    lines.push(`spearman(stage, mean loss) = ${summary.spearman.toFixed(3)}`);
    return lines.join("\n");
}
