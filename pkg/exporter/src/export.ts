import { readFileSync, writeFileSync } from 'fs';

import { collectItems, readClassMap } from './dataset';
import { resolveModel } from './models';
import { PredictionLine, argmax, formatLine, softmax } from './schema';

export interface ExportJob {
  model: string;
  dataRoot: string;
  numClasses: number;
  mapPath: string;
  outPath: string;
  batchSize: number;
}

/**
 * Run the model over every image under the dataset root (sorted-path order)
 * and write one JSON-lines record per image: ground truth from the class
 * mapping, predicted label as the softmax argmax, predicted probability as
 * the softmax maximum. Returns the written lines.
 */
export function exportPredictions(job: ExportJob): PredictionLine[] {
  if (job.numClasses < 2) {
    throw new Error(`--classes must be >= 2, got ${job.numClasses}`);
  }
  if (job.batchSize < 1) {
    throw new Error(`--batch must be >= 1, got ${job.batchSize}`);
  }
  const model = resolveModel(job.model);
  const classMap = readClassMap(job.mapPath, job.numClasses);
  const items = collectItems(job.dataRoot, classMap);

  const lines: PredictionLine[] = [];
  for (let start = 0; start < items.length; start += job.batchSize) {
    const batch = items.slice(start, start + job.batchSize);
    const contents = batch.map((item) => readFileSync(item.absPath));
    const logitsBatch = model.predictBatch(contents, job.numClasses);
    for (let i = 0; i < batch.length; i++) {
      const probs = softmax(logitsBatch[i]);
      const yhat = argmax(probs);
      lines.push({
        y: batch[i].label,
        yhat,
        p: probs[yhat],
        id: batch[i].relPath,
      });
    }
  }
  writeFileSync(job.outPath, lines.map(formatLine).join('\n') + '\n');
  return lines;
}
