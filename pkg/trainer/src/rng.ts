/** Deterministic seeded RNG (mulberry32) plus a gaussian sampler. */

export class Rng {
    private state: number;
    private spare: number | null = null;

    constructor(seed: number) {
        this.state = seed >>> 0;
    }

    next(): number {
        this.state = (this.state + 0x6d2b79f5) >>> 0;
        let t = this.state;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    }

    /** Box-Muller. */
    gauss(mean = 0, std = 1): number {
        if (this.spare !== null) {
            const v = this.spare;
            this.spare = null;
            return mean + std * v;
        }
        let u = 0;
        let v = 0;
        while (u === 0) u = this.next();
        while (v === 0) v = this.next();
        const mag = Math.sqrt(-2.0 * Math.log(u));
        this.spare = mag * Math.sin(2.0 * Math.PI * v);
        return mean + std * mag * Math.cos(2.0 * Math.PI * v);
    }
}
