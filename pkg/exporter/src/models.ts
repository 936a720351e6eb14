/**
 * Model loading: real tfjs graph/layers models, or a deterministic mock.
 *
 * The mock exists so the exporter's file contract can be exercised without
 * downloading weights: it hashes the crop's pixel bytes (position-sensitive,
 * so every crop and flip scores differently) into one pseudo-logit per
 * class, seeded by the model name.  Same crop, same model, same logits - on
 * any machine.
 */

import { RgbImage } from './image'

export interface ModelSpec {
  /** mock name, or path/URL of a tfjs model.json */
  id: string
  inputSize: number
}

export interface LoadedModel {
  spec: ModelSpec
  /** Raw class scores for one crop; length must equal classCount. */
  logits(crop: RgbImage, classCount: number): number[] | Promise<number[]>
}

/** Parse "id@size"; the input size defaults to 224. */
export function parseModelSpec(raw: string): ModelSpec {
  const at = raw.lastIndexOf('@')
  if (at < 0) return { id: raw, inputSize: 224 }
  const id = raw.slice(0, at)
  const size = Number(raw.slice(at + 1))
  if (!id || !Number.isInteger(size) || size < 1) {
    throw new Error(`bad model spec ${raw}; expected id@size`)
  }
  return { id, inputSize: size }
}

const FNV_OFFSET = 0x811c9dc5
const FNV_PRIME = 0x01000193

function fnv1a(seed: number, byte: number): number {
  return Math.imul(seed ^ byte, FNV_PRIME) >>> 0
}

function hashString(seed: number, text: string): number {
  let h = seed
  for (let i = 0; i < text.length; i++) h = fnv1a(h, text.charCodeAt(i))
  return h
}

/** Deterministic bytes -> logits function used by --mock runs. */
export function mockLogits(modelId: string, crop: RgbImage, classCount: number): number[] {
  const base = hashString(FNV_OFFSET, modelId)
  const out: number[] = []
  for (let c = 0; c < classCount; c++) {
    let h = fnv1a(base, c & 0xff)
    h = fnv1a(h, (c >> 8) & 0xff)
    for (let i = 0; i < crop.data.length; i++) h = fnv1a(h, crop.data[i])
    // map the 32-bit hash into a tame logit range
    out.push((h / 0xffffffff) * 6 - 3)
  }
  return out
}

export function loadMockModel(spec: ModelSpec): LoadedModel {
  return {
    spec,
    logits: (crop, classCount) => mockLogits(spec.id, crop, classCount),
  }
}

/**
 * Load a real tfjs model lazily.  @tensorflow/tfjs is resolved at call time
 * so mock-only installs need not carry it.
 */
export async function loadTfjsModel(spec: ModelSpec): Promise<LoadedModel> {
  let tf: any
  try {
    tf = await import('@tensorflow/tfjs')
  } catch {
    throw new Error(
      'real-model export needs @tensorflow/tfjs (npm install @tensorflow/tfjs), ' +
        'or pass --mock for the deterministic mock models',
    )
  }
  const url = spec.id.includes('://') ? spec.id : `file://${spec.id}`
  let model: any
  try {
    model = await tf.loadGraphModel(url)
  } catch {
    model = await tf.loadLayersModel(url)
  }
  return {
    spec,
    logits: async (crop: RgbImage, classCount: number) => {
      const pixels = tf.tensor4d(Array.from(crop.data, (v: number) => v / 255), [
        1,
        crop.height,
        crop.width,
        3,
      ])
      try {
        const result = model.predict(pixels)
        const values = Array.from(await result.data()) as number[]
        result.dispose()
        if (values.length !== classCount) {
          throw new Error(
            `model ${spec.id} emits ${values.length} classes, expected ${classCount}`,
          )
        }
        return values
      } finally {
        pixels.dispose()
      }
    },
  }
}

export function loadModel(spec: ModelSpec, mock: boolean): Promise<LoadedModel> | LoadedModel {
  return mock ? loadMockModel(spec) : loadTfjsModel(spec)
}

/** Numerically safe softmax; rows sum to 1 up to float rounding. */
export function softmax(logits: number[]): number[] {
  const top = Math.max(...logits)
  const exps = logits.map((v) => Math.exp(v - top))
  const total = exps.reduce((a, b) => a + b, 0)
  return exps.map((v) => v / total)
}
