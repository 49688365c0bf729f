import { createHash } from 'crypto';
import { readFileSync } from 'fs';

/**
 * A classifier backend: maps a batch of raw image files to one logit vector
 * per file. Implementations must be deterministic in evaluation mode so
 * re-running a job yields a byte-identical log.
 */
export interface ClassifierModel {
  readonly name: string;
  predictBatch(contents: Buffer[], numClasses: number): number[][];
}

/** Same logits for every input; class 0 always wins. */
class FixedStubModel implements ClassifierModel {
  readonly name = 'stub-fixed';

  predictBatch(contents: Buffer[], numClasses: number): number[][] {
    const logits: number[] = [];
    for (let i = 0; i < numClasses; i++) logits.push(-i / 2);
    return contents.map(() => [...logits]);
  }
}

/** Logits derived from a SHA-256 of the file content; varied but stable. */
class HashStubModel implements ClassifierModel {
  readonly name = 'stub-hash';

  predictBatch(contents: Buffer[], numClasses: number): number[][] {
    return contents.map((buf) => {
      const digest = createHash('sha256').update(buf).digest();
      const logits: number[] = [];
      for (let i = 0; i < numClasses; i++) {
        // two bytes per logit, scaled into [0, 4)
        const hi = digest[(2 * i) % digest.length];
        const lo = digest[(2 * i + 1) % digest.length];
        logits.push(((hi << 8) | lo) / 16384);
      }
      return logits;
    });
  }
}

interface LinearModelFile {
  feature: 'byte-histogram';
  numClasses: number;
  weights: number[][]; // numClasses x 256
  bias: number[]; // numClasses
}

/**
 * Linear classifier over a normalized byte histogram of the raw file,
 * defined by a JSON weights file. The preprocessing (histogram) is part of
 * the model definition, mirroring how published models carry their own
 * preprocessing configuration.
 */
class LinearHistogramModel implements ClassifierModel {
  readonly name: string;
  private readonly spec: LinearModelFile;

  constructor(weightsPath: string) {
    this.name = `linear:${weightsPath}`;
    const raw = JSON.parse(readFileSync(weightsPath, 'utf-8')) as LinearModelFile;
    if (raw.feature !== 'byte-histogram') {
      throw new Error(`linear model ${weightsPath}: unsupported feature ${raw.feature}`);
    }
    if (
      !Array.isArray(raw.weights) ||
      raw.weights.length !== raw.numClasses ||
      raw.bias.length !== raw.numClasses ||
      raw.weights.some((row) => row.length !== 256)
    ) {
      throw new Error(`linear model ${weightsPath}: weights must be numClasses x 256`);
    }
    this.spec = raw;
  }

  predictBatch(contents: Buffer[], numClasses: number): number[][] {
    if (numClasses !== this.spec.numClasses) {
      throw new Error(
        `linear model expects ${this.spec.numClasses} classes, job says ${numClasses}`,
      );
    }
    return contents.map((buf) => {
      const hist = new Float64Array(256);
      for (const byte of buf) hist[byte] += 1;
      const total = buf.length || 1;
      const logits: number[] = [];
      for (let k = 0; k < numClasses; k++) {
        let acc = this.spec.bias[k];
        const row = this.spec.weights[k];
        for (let b = 0; b < 256; b++) acc += row[b] * (hist[b] / total);
        logits.push(acc);
      }
      return logits;
    });
  }
}

/**
 * Resolve a model identifier. Built-ins are 'stub-fixed' and 'stub-hash';
 * 'linear:<weights.json>' loads a linear byte-histogram model from disk.
 */
export function resolveModel(name: string): ClassifierModel {
  if (name === 'stub-fixed') return new FixedStubModel();
  if (name === 'stub-hash') return new HashStubModel();
  if (name.startsWith('linear:')) {
    return new LinearHistogramModel(name.slice('linear:'.length));
  }
  throw new Error(
    `unknown model '${name}' (expected stub-fixed, stub-hash, or linear:<weights.json>)`,
  );
}
