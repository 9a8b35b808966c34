import { describe, expect, it } from "vitest";

import { batches, parseExample, readExamples } from "../src/jsonl.js";

const GOOD = JSON.stringify({
    step: 3,
    stage: 1,
    tokens: ["the", "dog"],
    corrupted: ["the", "[MASK]"],
    labels: [{ pos: 1, original_token: "dog" }],
    seed: 42,
});

describe("parseExample", () => {
    it("reads the masker schema", () => {
        const ex = parseExample(GOOD, 1);
        expect(ex.step).toBe(3);
        expect(ex.stage).toBe(1);
        expect(ex.corrupted).toEqual(["the", "[MASK]"]);
        expect(ex.labels).toEqual([{ pos: 1, original_token: "dog" }]);
        expect(ex.seed).toBe(42);
    });

    it("names the offending field on schema violations", () => {
        const noStage = JSON.parse(GOOD);
        delete noStage.stage;
        expect(() => parseExample(JSON.stringify(noStage), 5)).toThrow(/"stage"/);

        const badLabel = JSON.parse(GOOD);
        badLabel.labels[0].pos = 99;
        expect(() => parseExample(JSON.stringify(badLabel), 2)).toThrow(/labels\[0\]\.pos/);

        const badCorrupted = JSON.parse(GOOD);
        badCorrupted.corrupted = [1, 2];
        expect(() => parseExample(JSON.stringify(badCorrupted), 2)).toThrow(/"corrupted"/);

        expect(() => parseExample("not json", 9)).toThrow(/line 9/);
    });
});

describe("readExamples", () => {
    it("loads the fixture produced by the masking pipeline", () => {
        const examples = readExamples("fixtures/examples.jsonl");
        expect(examples.length).toBe(80);
        // stream order carries the curriculum: warmup first, then stages
        expect(examples[0].stage).toBe(0);
        expect(new Set(examples.map(e => e.stage))).toEqual(new Set([0, 1, 2, 3, 4]));
        for (const [i, ex] of examples.entries()) {
            expect(ex.step).toBe(i);
            for (const lab of ex.labels) {
                expect(lab.pos).toBeGreaterThanOrEqual(0);
                expect(lab.pos).toBeLessThan(ex.corrupted.length);
            }
        }
    });
});

describe("batches", () => {
    it("keeps order and drops the remainder", () => {
        const examples = readExamples("fixtures/examples.jsonl");
        const got = [...batches(examples, 8)];
        expect(got.length).toBe(10);
        expect(got[0][0].step).toBe(0);
        expect(got[9][7].step).toBe(79);
        expect([...batches(examples.slice(0, 7), 8)]).toEqual([]);
    });
});
