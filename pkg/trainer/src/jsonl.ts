/**
 * Reader for the masker's JSONL example stream.
 *
 * One example per line:
 *   {step, stage, tokens, corrupted, labels: [{pos, original_token}], seed}
 *
 * The trainer consumes only `corrupted` (model input), `labels`
 * (prediction targets at masked positions), and `stage`/`step` metadata.
 * Schema violations throw with the offending field named.
 */

import { readFileSync } from "node:fs";

export interface LabeledPosition {
    pos: number;
    original_token: string;
}

export interface MaskedExample {
    step: number;
    stage: number;
    corrupted: string[];
    labels: LabeledPosition[];
    seed: number;
}

class SchemaError extends Error {
    constructor(line: number, field: string, detail: string) {
        super(`example on line ${line}: field "${field}" ${detail}`);
        this.name = "SchemaError";
    }
}

function requireNumber(doc: Record<string, unknown>, field: string, line: number): number {
    const v = doc[field];
    if (typeof v !== "number" || !Number.isFinite(v)) {
        throw new SchemaError(line, field, "must be a finite number");
    }
    return v;
}

function requireStringArray(doc: Record<string, unknown>, field: string, line: number): string[] {
    const v = doc[field];
    if (!Array.isArray(v) || v.some(x => typeof x !== "string")) {
        throw new SchemaError(line, field, "must be an array of strings");
    }
    return v as string[];
}

export function parseExample(text: string, line: number): MaskedExample {
    let doc: Record<string, unknown>;
    try {
        doc = JSON.parse(text);
    } catch {
        throw new SchemaError(line, "(line)", "is not valid JSON");
    }
    const corrupted = requireStringArray(doc, "corrupted", line);
    const rawLabels = doc["labels"];
    if (!Array.isArray(rawLabels)) {
        throw new SchemaError(line, "labels", "must be an array");
    }
    const labels: LabeledPosition[] = rawLabels.map((lab, i) => {
        if (typeof lab !== "object" || lab === null) {
            throw new SchemaError(line, `labels[${i}]`, "must be an object");
        }
        const pos = (lab as Record<string, unknown>)["pos"];
        const tok = (lab as Record<string, unknown>)["original_token"];
        if (typeof pos !== "number" || pos < 0 || pos >= corrupted.length) {
            throw new SchemaError(line, `labels[${i}].pos`, "must index into corrupted");
        }
        if (typeof tok !== "string") {
            throw new SchemaError(line, `labels[${i}].original_token`, "must be a string");
        }
        return { pos, original_token: tok };
    });
    return {
        step: requireNumber(doc, "step", line),
        stage: requireNumber(doc, "stage", line),
        corrupted,
        labels,
        seed: requireNumber(doc, "seed", line),
    };
}

export function readExamples(path: string): MaskedExample[] {
    const lines = readFileSync(path, "utf-8").split("\n");
    const out: MaskedExample[] = [];
    for (let i = 0; i < lines.length; i++) {
        if (lines[i].trim() !== "") {
            out.push(parseExample(lines[i], i + 1));
        }
    }
    return out;
}

/** Consecutive fixed-size batches, stream order preserved; remainder dropped. */
export function* batches(examples: MaskedExample[], size: number): Generator<MaskedExample[]> {
    for (let i = 0; i + size <= examples.length; i += size) {
        yield examples.slice(i, i + size);
    }
}
