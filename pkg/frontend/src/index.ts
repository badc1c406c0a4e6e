export { ApiClient, ApiError } from './api'
export { CommandCoalescer, commandKey } from './coalescer'
export { AXIS_BINDINGS, AttachmentDropdown, PanelVisibility, clampToRange } from './panel'
export { applyTransform, project } from './project'
export { SPECIES_COLORS, SceneViewModel, StalenessMonitor } from './view'
export { SnapshotStream } from './ws'
export { mount } from './main'
export type * from './types'
