import { describe, expect, it } from 'vitest'

import { RgbImage } from '../src/image'
import { mockLogits, parseModelSpec, softmax } from '../src/models'

function solid(width: number, height: number, value: number): RgbImage {
  return { width, height, data: new Uint8Array(width * height * 3).fill(value) }
}

describe('parseModelSpec', () => {
  it('splits id and input size', () => {
    expect(parseModelSpec('mock-a@32')).toEqual({ id: 'mock-a', inputSize: 32 })
    expect(parseModelSpec('models/resnet/model.json@224')).toEqual({
      id: 'models/resnet/model.json',
      inputSize: 224,
    })
  })

  it('defaults the size to 224', () => {
    expect(parseModelSpec('mock-a')).toEqual({ id: 'mock-a', inputSize: 224 })
  })

  it('rejects malformed specs', () => {
    expect(() => parseModelSpec('@32')).toThrow(/bad model spec/)
    expect(() => parseModelSpec('m@zero')).toThrow(/bad model spec/)
  })
})

describe('mockLogits', () => {
  it('is deterministic', () => {
    const crop = solid(8, 8, 77)
    expect(mockLogits('mock-a', crop, 4)).toEqual(mockLogits('mock-a', crop, 4))
  })

  it('differs across models, classes and pixel contents', () => {
    const crop = solid(8, 8, 77)
    const other = solid(8, 8, 78)
    const a = mockLogits('mock-a', crop, 3)
    const b = mockLogits('mock-b', crop, 3)
    expect(a).not.toEqual(b)
    expect(new Set(a).size).toBe(3)
    expect(mockLogits('mock-a', other, 3)).not.toEqual(a)
  })

  it('is sensitive to pixel order (flips score differently)', () => {
    const crop: RgbImage = { width: 2, height: 1, data: new Uint8Array([1, 2, 3, 4, 5, 6]) }
    const flipped: RgbImage = { width: 2, height: 1, data: new Uint8Array([4, 5, 6, 1, 2, 3]) }
    expect(mockLogits('mock-a', crop, 2)).not.toEqual(mockLogits('mock-a', flipped, 2))
  })

  it('stays in a tame range', () => {
    const crop = solid(16, 16, 200)
    for (const v of mockLogits('mock-a', crop, 8)) {
      expect(v).toBeGreaterThanOrEqual(-3)
      expect(v).toBeLessThanOrEqual(3)
    }
  })
})

describe('softmax', () => {
  it('sums to one and keeps order', () => {
    const probs = softmax([1, 2, 3])
    expect(probs[2]).toBeGreaterThan(probs[1])
    expect(probs[1]).toBeGreaterThan(probs[0])
    const total = probs.reduce((a, b) => a + b, 0)
    expect(Math.abs(total - 1)).toBeLessThan(1e-12)
  })

  it('is overflow-safe', () => {
    const probs = softmax([1000, 1000])
    expect(probs).toEqual([0.5, 0.5])
  })
})
