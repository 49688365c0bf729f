import { z } from 'zod';

/**
 * One prediction-log line, as consumed by the predmatch CLI: ground truth
 * label, predicted label (argmax of the softmax), predicted probability
 * (max of the softmax), all 0-based. The optional id is echoed by the
 * consumer in diagnostics.
 */
export interface PredictionLine {
  y: number;
  yhat: number;
  p: number;
  id?: string;
}

export const predictionLineSchema = z.object({
  y: z.number().int().nonnegative(),
  yhat: z.number().int().nonnegative(),
  p: z.number().min(0).max(1),
  id: z.string().optional(),
});

/** Numerically stable softmax over one logit vector. */
export function softmax(logits: number[]): number[] {
  let max = -Infinity;
  for (const v of logits) {
    if (v > max) max = v;
  }
  const exps = logits.map((v) => Math.exp(v - max));
  const sum = exps.reduce((a, b) => a + b, 0);
  return exps.map((v) => v / sum);
}

export function argmax(values: number[]): number {
  let best = 0;
  for (let i = 1; i < values.length; i++) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

/** Serialize one line; JSON.stringify emits shortest round-trip decimals. */
export function formatLine(line: PredictionLine): string {
  const obj: Record<string, unknown> = { y: line.y, yhat: line.yhat, p: line.p };
  if (line.id !== undefined) obj.id = line.id;
  return JSON.stringify(obj);
}
