/** Vocabulary shared with the masking pipeline: one piece per line, id = line index. */

import { readFileSync } from "node:fs";

export class Vocab {
    readonly tokenToId: Map<string, number>;
    readonly size: number;
    readonly unkId: number;

    constructor(pieces: string[]) {
        this.tokenToId = new Map();
        for (const piece of pieces) {
            if (!this.tokenToId.has(piece)) {
                this.tokenToId.set(piece, this.tokenToId.size);
            }
        }
        this.size = this.tokenToId.size;
        const unk = this.tokenToId.get("[UNK]");
        if (unk === undefined) {
            throw new Error('vocabulary must contain "[UNK]"');
        }
        this.unkId = unk;
    }

    static fromFile(path: string): Vocab {
        const pieces = readFileSync(path, "utf-8").split("\n").filter(l => l !== "");
        return new Vocab(pieces);
    }

    encode(tokens: string[]): Int32Array {
        const ids = new Int32Array(tokens.length);
        for (let i = 0; i < tokens.length; i++) {
            ids[i] = this.tokenToId.get(tokens[i]) ?? this.unkId;
        }
        return ids;
    }

    id(token: string): number {
        return this.tokenToId.get(token) ?? this.unkId;
    }
}
