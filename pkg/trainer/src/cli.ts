/**
 * ccmask-trainer CLI.
 *
 *   node dist/cli.js train --examples <examples.jsonl> --vocab <vocab.txt> --out <dir>
 *       [--batch-size 8] [--steps N] [--hidden 128] [--layers 2] [--heads 2]
 *       [--ffn 256] [--lr 1e-3] [--seed 0] [--log-interval 1]
 *
 * Writes loss.csv (step,stage,loss) and summary.json (per-stage mean/std
 * plus the stage-vs-loss Spearman correlation), and prints the table.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { readExamples } from "./jsonl.js";
import { formatSummary, stageLossSummary } from "./summary.js";
import { DEFAULT_TRAIN_CONFIG, TrainRunConfig, lossLogToCsv, train } from "./train.js";
import { Vocab } from "./vocab.js";

function usageError(message: string): never {
    console.error(`error: ${message}`);
    process.exit(2);
}

export function main(argv: string[]): void {
    const command = argv[0];
    if (command !== "train") {
        usageError(`unknown command "${command ?? ""}" (expected: train)`);
    }
    const { values } = parseArgs({
        args: argv.slice(1),
        options: {
            examples: { type: "string" },
            vocab: { type: "string" },
            out: { type: "string" },
            "batch-size": { type: "string" },
            steps: { type: "string" },
            hidden: { type: "string" },
            layers: { type: "string" },
            heads: { type: "string" },
            ffn: { type: "string" },
            lr: { type: "string" },
            seed: { type: "string" },
            "log-interval": { type: "string" },
        },
    });
    if (!values.examples || !values.vocab || !values.out) {
        usageError("--examples, --vocab, and --out are required");
    }
    const num = (v: string | undefined, fallback: number) => (v === undefined ? fallback : Number(v));
    const cfg: TrainRunConfig = {
        ...DEFAULT_TRAIN_CONFIG,
        batchSize: num(values["batch-size"], DEFAULT_TRAIN_CONFIG.batchSize),
        maxSteps: values.steps === undefined ? null : Number(values.steps),
        hidden: num(values.hidden, DEFAULT_TRAIN_CONFIG.hidden),
        layers: num(values.layers, DEFAULT_TRAIN_CONFIG.layers),
        heads: num(values.heads, DEFAULT_TRAIN_CONFIG.heads),
        ffn: num(values.ffn, DEFAULT_TRAIN_CONFIG.ffn),
        peakLr: num(values.lr, DEFAULT_TRAIN_CONFIG.peakLr),
        seed: num(values.seed, DEFAULT_TRAIN_CONFIG.seed),
        logInterval: num(values["log-interval"], DEFAULT_TRAIN_CONFIG.logInterval),
    };

    const examples = readExamples(values.examples);
    const vocab = Vocab.fromFile(values.vocab);
    console.log(`${examples.length} examples, vocab ${vocab.size}, batch ${cfg.batchSize}`);

    const started = Date.now();
    const { log, model } = train(examples, vocab, cfg, r => {
        if (r.step % 50 === 0) {
            const elapsed = ((Date.now() - started) / 1000).toFixed(0);
            console.log(`step ${r.step}  stage ${r.stage}  loss ${r.loss.toFixed(4)}  (${elapsed}s)`);
        }
    });
    console.log(`trained ${log.length} logged steps, ${model.parameterCount()} parameters`);

    const summary = stageLossSummary(log);
    mkdirSync(values.out, { recursive: true });
    writeFileSync(`${values.out}/loss.csv`, lossLogToCsv(log));
    writeFileSync(
        `${values.out}/summary.json`,
        JSON.stringify(
            {
                stages: summary.stages,
                spearman: summary.spearman,
                config: { ...cfg },
                examples: examples.length,
            },
            null,
            2,
        ) + "\n",
    );
    console.log(formatSummary(summary));
}

main(process.argv.slice(2));
