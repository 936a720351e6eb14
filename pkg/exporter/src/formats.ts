/**
 * Writers for the dtfusion on-disk formats (dump v1 and labels v1).
 *
 * Tab-separated text with a versioned header; floats are written with
 * JavaScript's default number formatting, which is the shortest decimal
 * string that round-trips the exact 64-bit value.  Rows are emitted in
 * canonical order: samples sorted by id, then crop id, then model index.
 */

import * as fs from 'fs'

export const DUMP_MAGIC = '#dtfusion-dump v1'
export const LABELS_MAGIC = '#dtfusion-labels v1'

export interface DumpRow {
  sampleId: string
  cropId: number
  modelIndex: number
  probs: number[]
}

export function checkSampleId(sampleId: string): string {
  if (!sampleId) throw new Error('sample id must be non-empty')
  if (/[\t\n\r]/.test(sampleId)) {
    throw new Error(`sample id ${JSON.stringify(sampleId)} contains tab or newline`)
  }
  if (sampleId.startsWith('#')) {
    throw new Error(`sample id ${JSON.stringify(sampleId)} may not start with '#'`)
  }
  return sampleId
}

export function renderDump(modelNames: string[], classNames: string[], rows: DumpRow[]): string {
  const lines = [
    DUMP_MAGIC,
    '#models\t' + modelNames.join('\t'),
    '#classes\t' + classNames.join('\t'),
  ]
  const sorted = [...rows].sort(
    (a, b) =>
      (a.sampleId < b.sampleId ? -1 : a.sampleId > b.sampleId ? 1 : 0) ||
      a.cropId - b.cropId ||
      a.modelIndex - b.modelIndex,
  )
  for (const row of sorted) {
    checkSampleId(row.sampleId)
    if (row.probs.length !== classNames.length) {
      throw new Error(
        `row for ${row.sampleId} has ${row.probs.length} probabilities, ` +
          `expected ${classNames.length}`,
      )
    }
    lines.push(
      [row.sampleId, String(row.cropId), String(row.modelIndex), ...row.probs.map(String)].join(
        '\t',
      ),
    )
  }
  return lines.join('\n') + '\n'
}

export function writeDump(
  path: string,
  modelNames: string[],
  classNames: string[],
  rows: DumpRow[],
): void {
  fs.writeFileSync(path, renderDump(modelNames, classNames, rows), 'utf8')
}

export function renderLabels(labels: Map<string, string>): string {
  const lines = [LABELS_MAGIC]
  for (const sampleId of [...labels.keys()].sort()) {
    checkSampleId(sampleId)
    lines.push(`${sampleId}\t${labels.get(sampleId)}`)
  }
  return lines.join('\n') + '\n'
}

export function writeLabels(path: string, labels: Map<string, string>): void {
  fs.writeFileSync(path, renderLabels(labels), 'utf8')
}
