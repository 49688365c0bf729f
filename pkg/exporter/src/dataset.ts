import { readFileSync, readdirSync, statSync } from 'fs';
import * as path from 'path';

/** One image to classify: relative path, resolved path, ground truth label. */
export interface DatasetItem {
  relPath: string;
  absPath: string;
  label: number;
}

/**
 * Class-index mapping file: JSON object from dataset folder name to a
 * 0-based class index. Every class folder present under the dataset root
 * must be mapped and every index must be below numClasses.
 */
export function readClassMap(mapPath: string, numClasses: number): Map<string, number> {
  const raw = JSON.parse(readFileSync(mapPath, 'utf-8')) as Record<string, unknown>;
  const map = new Map<string, number>();
  for (const [folder, value] of Object.entries(raw)) {
    if (typeof value !== 'number' || !Number.isInteger(value)) {
      throw new Error(`${mapPath}: class '${folder}' maps to non-integer ${value}`);
    }
    if (value < 0 || value >= numClasses) {
      throw new Error(
        `${mapPath}: class '${folder}' maps to ${value}, outside [0, ${numClasses})`,
      );
    }
    map.set(folder, value);
  }
  return map;
}

/**
 * Collect dataset items from a folder-per-class layout, in deterministic
 * lexicographic order of their relative paths. Unmapped class folders are
 * an error, listed all at once.
 */
export function collectItems(dataRoot: string, classMap: Map<string, number>): DatasetItem[] {
  const folders = readdirSync(dataRoot)
    .filter((entry) => statSync(path.join(dataRoot, entry)).isDirectory())
    .sort();
  if (folders.length === 0) {
    throw new Error(`${dataRoot}: no class folders found`);
  }
  const unmapped = folders.filter((f) => !classMap.has(f));
  if (unmapped.length > 0) {
    throw new Error(
      `${dataRoot}: class folder(s) missing from the mapping file: ${unmapped.join(', ')}`,
    );
  }
  const items: DatasetItem[] = [];
  for (const folder of folders) {
    const label = classMap.get(folder)!;
    const dir = path.join(dataRoot, folder);
    for (const file of readdirSync(dir).sort()) {
      const absPath = path.join(dir, file);
      if (!statSync(absPath).isFile()) continue;
      items.push({ relPath: `${folder}/${file}`, absPath, label });
    }
  }
  if (items.length === 0) {
    throw new Error(`${dataRoot}: class folders contain no files`);
  }
  items.sort((a, b) => (a.relPath < b.relPath ? -1 : a.relPath > b.relPath ? 1 : 0));
  return items;
}
