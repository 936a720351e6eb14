// @tensorflow/tfjs is an optional runtime dependency, resolved dynamically
// only when a real (non-mock) model is requested; installs that never leave
// mock mode do not carry it, so no types are available at build time.
declare module '@tensorflow/tfjs' {
  const tf: any
  export = tf
}
