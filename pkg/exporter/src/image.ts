/**
 * Image decoding, resizing and the crop protocol.
 *
 * Crops are numbered so that downstream single-crop evaluation can rely on
 * crop 0 being the center crop:
 *
 *   0 center          5 center, flipped
 *   1 upper left      6 upper left, flipped
 *   2 upper right     7 upper right, flipped
 *   3 lower left      8 lower left, flipped
 *   4 lower right     9 lower right, flipped
 *
 * "Flipped" is a horizontal mirror.  Single-crop mode emits only crop 0.
 */

import * as fs from 'fs'
import * as path from 'path'
import * as jpeg from 'jpeg-js'
import { PNG } from 'pngjs'

/** Plain interleaved RGB pixels, 8 bits per channel. */
export interface RgbImage {
  width: number
  height: number
  data: Uint8Array // length = width * height * 3
}

export function decodeImageFile(filePath: string): RgbImage {
  const bytes = fs.readFileSync(filePath)
  const ext = path.extname(filePath).toLowerCase()
  if (ext === '.png') {
    const png = PNG.sync.read(bytes)
    return dropAlpha(png.width, png.height, png.data)
  }
  if (ext === '.jpg' || ext === '.jpeg') {
    const decoded = jpeg.decode(bytes, { useTArray: true })
    return dropAlpha(decoded.width, decoded.height, decoded.data)
  }
  throw new Error(`unsupported image format: ${filePath}`)
}

function dropAlpha(width: number, height: number, rgba: Uint8Array | Buffer): RgbImage {
  const out = new Uint8Array(width * height * 3)
  for (let i = 0, j = 0; i < width * height; i++, j += 4) {
    out[i * 3] = rgba[j]
    out[i * 3 + 1] = rgba[j + 1]
    out[i * 3 + 2] = rgba[j + 2]
  }
  return { width, height, data: out }
}

/**
 * Bilinear resize so the shortest side equals `target`, preserving aspect
 * ratio.  An image whose shortest side already matches is returned as-is.
 */
export function resizeShortestSide(image: RgbImage, target: number): RgbImage {
  const { width, height } = image
  const shortest = Math.min(width, height)
  if (shortest === target) return image
  const scale = target / shortest
  const outW = width <= height ? target : Math.max(target, Math.round(width * scale))
  const outH = width <= height ? Math.max(target, Math.round(height * scale)) : target
  const out = new Uint8Array(outW * outH * 3)
  for (let y = 0; y < outH; y++) {
    // map output pixel centers back into source coordinates
    const sy = Math.min(((y + 0.5) * height) / outH - 0.5, height - 1)
    const y0 = Math.max(0, Math.floor(sy))
    const y1 = Math.min(height - 1, y0 + 1)
    const fy = sy - y0
    for (let x = 0; x < outW; x++) {
      const sx = Math.min(((x + 0.5) * width) / outW - 0.5, width - 1)
      const x0 = Math.max(0, Math.floor(sx))
      const x1 = Math.min(width - 1, x0 + 1)
      const fx = sx - x0
      for (let ch = 0; ch < 3; ch++) {
        const p00 = image.data[(y0 * width + x0) * 3 + ch]
        const p01 = image.data[(y0 * width + x1) * 3 + ch]
        const p10 = image.data[(y1 * width + x0) * 3 + ch]
        const p11 = image.data[(y1 * width + x1) * 3 + ch]
        const top = p00 + (p01 - p00) * fx
        const bottom = p10 + (p11 - p10) * fx
        out[(y * outW + x) * 3 + ch] = Math.round(top + (bottom - top) * fy)
      }
    }
  }
  return { width: outW, height: outH, data: out }
}

export function cropRegion(image: RgbImage, left: number, top: number, size: number): RgbImage {
  if (left < 0 || top < 0 || left + size > image.width || top + size > image.height) {
    throw new Error(
      `crop ${size}x${size}@(${left},${top}) outside image ${image.width}x${image.height}`,
    )
  }
  const out = new Uint8Array(size * size * 3)
  for (let y = 0; y < size; y++) {
    const srcStart = ((top + y) * image.width + left) * 3
    out.set(image.data.subarray(srcStart, srcStart + size * 3), y * size * 3)
  }
  return { width: size, height: size, data: out }
}

export function flipHorizontal(image: RgbImage): RgbImage {
  const { width, height } = image
  const out = new Uint8Array(width * height * 3)
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const src = (y * width + x) * 3
      const dst = (y * width + (width - 1 - x)) * 3
      out[dst] = image.data[src]
      out[dst + 1] = image.data[src + 1]
      out[dst + 2] = image.data[src + 2]
    }
  }
  return { width, height, data: out }
}

export type CropMode = 'center_1' | 'ten_crop'

/**
 * Resize and cut the documented crops.  Index in the returned array is the
 * crop id; center_1 returns only crop 0.
 */
export function extractCrops(image: RgbImage, size: number, mode: CropMode): RgbImage[] {
  const resized = resizeShortestSide(image, size)
  const maxLeft = resized.width - size
  const maxTop = resized.height - size
  const center = cropRegion(resized, Math.floor(maxLeft / 2), Math.floor(maxTop / 2), size)
  if (mode === 'center_1') return [center]
  const corners = [
    cropRegion(resized, 0, 0, size), // upper left
    cropRegion(resized, maxLeft, 0, size), // upper right
    cropRegion(resized, 0, maxTop, size), // lower left
    cropRegion(resized, maxLeft, maxTop, size), // lower right
  ]
  const originals = [center, ...corners]
  return [...originals, ...originals.map(flipHorizontal)]
}
