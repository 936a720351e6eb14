#!/usr/bin/env node
/**
 * export --images DIR --models M1,M2 --crops {1,10} --out-dump PATH
 *        --out-labels PATH [--mock] [--class-names PATH]
 *
 * Model specs are "id@inputSize" (size defaults to 224).  With --mock the
 * ids name deterministic mock models; otherwise they are tfjs model.json
 * paths or URLs.
 */

import * as fs from 'fs'
import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'

import { runExport } from './exportJob'
import { loadModel, parseModelSpec } from './models'

export async function main(argv: string[]): Promise<number> {
  let args
  try {
    args = await yargs(argv)
      .command('export', 'run two models over an image folder and write dtfusion files')
      .demandCommand(1)
      .option('images', { type: 'string', demandOption: true, describe: 'image root (one folder per class)' })
      .option('models', { type: 'string', demandOption: true, describe: 'two comma-separated model specs, id@size' })
      .option('crops', { type: 'string', choices: ['1', '10'], default: '10', describe: '1 = center crop only, 10 = full crop set' })
      .option('out-dump', { type: 'string', demandOption: true })
      .option('out-labels', { type: 'string', demandOption: true })
      .option('mock', { type: 'boolean', default: false, describe: 'use deterministic mock models' })
      .option('class-names', { type: 'string', describe: 'optional file with one class name per line' })
      .strict()
      .exitProcess(false)
      .fail((message, error) => {
        throw error ?? new Error(message)
      })
      .parse()
  } catch (err) {
    console.error(`dtfusion-export: ${err instanceof Error ? err.message : err}`)
    return 2
  }

  const specs = String(args.models).split(',').map((s) => parseModelSpec(s.trim()))
  if (specs.length !== 2) {
    console.error(`need exactly 2 model specs, got ${specs.length}`)
    return 2
  }
  let classNames: string[] | undefined
  if (args['class-names']) {
    classNames = fs
      .readFileSync(String(args['class-names']), 'utf8')
      .split('\n')
      .map((line) => line.trim())
      .filter(Boolean)
  }
  try {
    const models = await Promise.all(specs.map((spec) => loadModel(spec, args.mock)))
    const result = await runExport({
      imageRoot: String(args.images),
      models: [models[0], models[1]],
      cropMode: args.crops === '1' ? 'center_1' : 'ten_crop',
      outDump: String(args['out-dump']),
      outLabels: String(args['out-labels']),
      classNames,
    })
    console.error(
      `exported ${result.exported.length} image(s), ` +
        `${result.skipped.length} skipped, ${result.classNames.length} classes`,
    )
    return 0
  } catch (err) {
    console.error(`dtfusion-export: ${err instanceof Error ? err.message : err}`)
    return 1
  }
}

if (require.main === module) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code
  })
}
