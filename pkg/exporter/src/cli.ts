#!/usr/bin/env node
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { exportPredictions } from './export';

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .scriptName('predexport')
    .usage(
      '$0 --model NAME --data DIR --classes K --map FILE --out LOG [--batch B]',
    )
    .option('model', {
      type: 'string',
      demandOption: true,
      describe: 'stub-fixed | stub-hash | linear:<weights.json>',
    })
    .option('data', {
      type: 'string',
      demandOption: true,
      describe: 'dataset root with one folder per class',
    })
    .option('classes', {
      type: 'number',
      demandOption: true,
      describe: 'number of classes K',
    })
    .option('map', {
      type: 'string',
      demandOption: true,
      describe: 'JSON file mapping class folder names to 0-based indices',
    })
    .option('out', {
      type: 'string',
      demandOption: true,
      describe: 'output prediction log (JSON lines)',
    })
    .option('batch', { type: 'number', default: 32, describe: 'batch size' })
    .strict()
    .help()
    .parseAsync();

  const lines = exportPredictions({
    model: argv.model,
    dataRoot: argv.data,
    numClasses: argv.classes,
    mapPath: argv.map,
    outPath: argv.out,
    batchSize: argv.batch,
  });
  console.log(`wrote ${lines.length} predictions to ${argv.out}`);
  return 0;
}

main()
  .then((code) => process.exit(code))
  .catch((err: NodeJS.ErrnoException) => {
    console.error(`error: ${err.message}`);
    // missing files and unwritable paths are I/O errors; everything else is
    // a validation problem (mirrors the predmatch exit-code contract)
    process.exit(err.code !== undefined ? 2 : 1);
  });
