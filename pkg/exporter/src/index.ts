export { CropMode, RgbImage, decodeImageFile, extractCrops, flipHorizontal, resizeShortestSide } from './image'
export { LoadedModel, ModelSpec, loadMockModel, loadModel, loadTfjsModel, mockLogits, parseModelSpec, softmax } from './models'
export { DumpRow, renderDump, renderLabels, writeDump, writeLabels } from './formats'
export { ExportJob, ExportResult, runExport } from './exportJob'
