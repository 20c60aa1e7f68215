#!/usr/bin/env node
import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'
import { extract } from './extract.js'

export function parseBins(spec: string): { h: number; s: number; v: number } {
  const parts = spec.split(',').map((p) => parseInt(p.trim(), 10))
  if (parts.length !== 3 || parts.some((v) => !Number.isInteger(v) || v < 1)) {
    throw new Error(`bins must be three positive integers 'h,s,v', got '${spec}'`)
  }
  return { h: parts[0], s: parts[1], v: parts[2] }
}

export async function run(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .usage('$0 --mode <embedding|histogram> --frames-dir <dir> --det <file> --out <file>')
    .option('mode', { choices: ['embedding', 'histogram'] as const, demandOption: true })
    .option('frames-dir', { type: 'string', demandOption: true })
    .option('det', { type: 'string', demandOption: true })
    .option('out', { type: 'string', demandOption: true })
    .option('model', { type: 'string', describe: 'model directory (embedding mode)' })
    .option('bins', { type: 'string', default: '8,8,4', describe: 'HSV bin counts h,s,v' })
    .strict()
    .fail((msg) => {
      throw new Error(msg)
    })
    .parse()

  const result = await extract({
    mode: args.mode,
    framesDir: args['frames-dir'],
    detPath: args.det,
    outPath: args.out,
    modelPath: args.model,
    bins: parseBins(args.bins),
  })
  console.error(`wrote ${result.written} features (${result.skipped} skipped) to ${args.out}`)
  return 0
}

const entry = process.argv[1] ?? ''
if (entry.endsWith('cli.js') || entry.endsWith('reidtrack-extract')) {
  run(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      console.error(`error: ${err.message}`)
      process.exit(2)
    })
}
