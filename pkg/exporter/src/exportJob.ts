/**
 * The export pipeline: walk a class-per-folder image tree, run two models
 * over the documented crops of every readable image, and write a dtfusion
 * prediction dump plus a label sidecar.
 *
 * Images live under imageRoot/<folder>/<file>.(png|jpg|jpeg); the folder
 * name (via labelMapping, if given) is the class name.  Sample ids are the
 * forward-slash relative paths, and files are processed in sorted order so
 * the output is deterministic for fixed model weights.
 */

import * as fs from 'fs'
import * as path from 'path'

import { CropMode, decodeImageFile, extractCrops } from './image'
import { LoadedModel, softmax } from './models'
import { DumpRow, writeDump, writeLabels } from './formats'

export interface ExportJob {
  imageRoot: string
  labelMapping?: Record<string, string>
  models: [LoadedModel, LoadedModel]
  cropMode: CropMode
  outDump: string
  outLabels: string
  /** Optional override for the dump's class names (defaults to folder-derived). */
  classNames?: string[]
  log?: (message: string) => void
}

export interface ExportResult {
  classNames: string[]
  exported: string[]
  skipped: string[]
}

const IMAGE_EXTENSIONS = new Set(['.png', '.jpg', '.jpeg'])

function listImageFiles(root: string): { relPath: string; folder: string }[] {
  const out: { relPath: string; folder: string }[] = []
  for (const folder of fs.readdirSync(root).sort()) {
    const folderPath = path.join(root, folder)
    if (!fs.statSync(folderPath).isDirectory()) continue
    for (const file of fs.readdirSync(folderPath).sort()) {
      if (IMAGE_EXTENSIONS.has(path.extname(file).toLowerCase())) {
        out.push({ relPath: `${folder}/${file}`, folder })
      }
    }
  }
  return out
}

export async function runExport(job: ExportJob): Promise<ExportResult> {
  const log = job.log ?? ((message: string) => console.error(message))
  const files = listImageFiles(job.imageRoot)
  if (files.length === 0) {
    throw new Error(`no images found under ${job.imageRoot}`)
  }
  const classOf = (folder: string): string => job.labelMapping?.[folder] ?? folder
  const classNames =
    job.classNames ?? [...new Set(files.map((f) => classOf(f.folder)))].sort()
  if (classNames.length < 2) {
    throw new Error(`need at least 2 classes, found ${classNames.length}`)
  }
  for (const file of files) {
    if (!classNames.includes(classOf(file.folder))) {
      throw new Error(`folder ${file.folder} maps to unknown class ${classOf(file.folder)}`)
    }
  }

  const [first, second] = job.models
  const rows: DumpRow[] = []
  const labels = new Map<string, string>()
  const exported: string[] = []
  const skipped: string[] = []

  for (const file of files) {
    let image
    try {
      image = decodeImageFile(path.join(job.imageRoot, file.relPath))
    } catch (err) {
      log(`warning: skipping unreadable image ${file.relPath}: ${err}`)
      skipped.push(file.relPath)
      continue
    }
    for (const [modelIndex, model] of [first, second].entries()) {
      const crops = extractCrops(image, model.spec.inputSize, job.cropMode)
      for (const [cropId, crop] of crops.entries()) {
        const logits = await model.logits(crop, classNames.length)
        if (logits.length !== classNames.length) {
          throw new Error(
            `model ${model.spec.id} produced ${logits.length} scores for ` +
              `${classNames.length} classes`,
          )
        }
        rows.push({
          sampleId: file.relPath,
          cropId,
          modelIndex,
          probs: softmax(logits),
        })
      }
    }
    labels.set(file.relPath, classOf(file.folder))
    exported.push(file.relPath)
  }

  if (exported.length === 0) {
    throw new Error('every image was unreadable; nothing to export')
  }
  writeDump(
    job.outDump,
    [first.spec.id, second.spec.id],
    classNames,
    rows,
  )
  writeLabels(job.outLabels, labels)
  return { classNames, exported, skipped }
}
