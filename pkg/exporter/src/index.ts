export { exportPredictions, ExportJob } from './export';
export { resolveModel, ClassifierModel } from './models';
export { collectItems, readClassMap, DatasetItem } from './dataset';
export {
  PredictionLine,
  predictionLineSchema,
  softmax,
  argmax,
  formatLine,
} from './schema';
