/** Browser entry point: mount the console on #app and go. */

import { mountApp } from './app.js'

const root = document.getElementById('app')
if (root) {
  const app = mountApp(root)
  void app.init()
}
